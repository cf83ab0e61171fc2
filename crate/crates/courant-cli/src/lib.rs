//! Library surface of the `courant` command-line tool: the structure-file
//! parser/printer and the built-in gallery.  The binary in `main.rs` drives
//! these; tests and downstream tooling can use them directly.

pub mod document;
pub mod gallery;
