//! Grammar compression for collections of short reads.
//!
//! The compressor builds a context-free grammar by iterated LMS parsing
//! (the parsing step of induced suffix sorting), stores it as a LOUDS-encoded
//! grammar tree, supports random access to individual reads, and computes the
//! extended BWT of the collection directly from the grammar.
//!
//! Pipeline:
//!
//! ```
//! use lpg::{ReadCollection, builder, tree::{GrammarTree, LabelMode}, glex, infbwt};
//!
//! let rc = ReadCollection::from_strs(&["AC", "AA"]).unwrap();
//! let grammar = builder::build(&rc);
//! let gt = GrammarTree::encode(&grammar, LabelMode::Fixed).unwrap();
//! let triplets = glex::glex(&gt).unwrap();
//! let ebwt = infbwt::infbwt(&gt, &triplets).unwrap();
//! assert_eq!(ebwt.to_bytes(gt.alphabet()), b"CAA$$A");
//! ```

pub mod builder;
pub mod error;
pub mod glex;
pub mod infbwt;
pub mod io;
pub mod lms;
pub mod oracle;
pub mod succinct;
pub mod text;
pub mod tree;

pub use error::{Error, Result};
pub use text::{Alphabet, EbwtString, ReadCollection, Symbol, SymbolString};
