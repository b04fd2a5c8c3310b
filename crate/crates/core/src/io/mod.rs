//! File formats and the benchmark harness behind the command-line tool.

pub mod archive;
pub mod bench;
pub mod ebrl;
pub mod reads;

pub use archive::{decode_archive, encode_archive, read_archive, write_archive};
pub use ebrl::{read_ebrl, write_ebrl};
pub use reads::{parse_reads, read_reads, ReadFormat};
