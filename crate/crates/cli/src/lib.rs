//! Command line and HTTP front ends for chromacut.

pub mod cli;
pub mod layout;
pub mod server;
