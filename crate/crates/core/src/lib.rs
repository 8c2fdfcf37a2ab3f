//! Substitutions on free monoids and the computations around Cobham's
//! theorem for substitutive sequences.

pub mod error;
pub mod fixtures;
pub mod growth;
pub mod harness;
pub mod independence;
pub mod language;
pub mod normalize;
pub mod periodicity;
pub mod spectral;
pub mod structure;
pub mod system;
pub mod words;

pub use error::{Error, Result};
pub use growth::{GrowthSummary, GrowthType, LetterGrowth};
pub use harness::{cobham_check, CobhamOptions, CobhamReport, Conclusion};
pub use independence::IndependenceVerdict;
pub use language::{RecurrenceEstimate, ReturnWordIndex};
pub use normalize::{normalize, NormalizedSystem};
pub use periodicity::PeriodicityCertificate;
pub use spectral::{IntMatrix, IntPoly, PerronValue};
pub use system::{parse_substitution_file, FixedPointStream, ImageStream, SubstitutionSystem};
pub use words::{compose, power, Alphabet, Letter, Morphism, Word};
