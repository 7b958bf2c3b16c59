pub mod bits;
pub mod coder;
pub mod debruijn;
pub mod error;
pub mod format;
pub mod harness;
pub mod lz78;
pub mod model;
pub mod oracle;
pub mod sam;
pub mod sequence;

pub use bits::BitString;
pub use error::Error;
pub use model::Mode;
