pub mod certificate;
pub mod error;
pub mod jsonl;
pub mod monoid;
pub mod properties;
pub mod ring;
pub mod sgps;
pub mod spec;
pub mod verify;

pub use certificate::{PropertyCertificate, Verdict, Witness};
pub use error::{Error, Result};
