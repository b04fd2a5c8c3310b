//! Bit-level building blocks: rank/select bitmaps, LOUDS trees, canonical
//! Huffman codes and fixed-width integer arrays.

mod bitmap;
mod huffman;
mod intvec;
mod louds;

pub use bitmap::{BitBuilder, RankBitmap};
pub use huffman::{BitReader, BitWriter, HuffmanTable};
pub use intvec::IntVec;
pub use louds::{LoudsTree, OrdinalTree};
