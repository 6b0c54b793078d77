pub mod dist;
pub mod error;

pub use error::{Error, Result};
pub mod cli;
pub mod io;
pub mod mcmc;
pub mod models;
pub mod roc;
pub mod sim;
