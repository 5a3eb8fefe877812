pub mod algebra;
pub mod canon;
pub mod cohomology;
pub mod contact;
pub mod enumerate;
pub mod error;
pub mod index;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod poset;
pub mod sweep;
pub mod topology;

pub use error::{Error, Result};
pub use poset::Poset;
