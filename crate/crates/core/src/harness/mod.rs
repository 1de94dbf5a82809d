//! Example corpus, exhaustive enumeration, verification campaigns and
//! reports.

pub mod dsl;
pub mod enumerate;
pub mod report;
pub mod verify;


pub use dsl::{parse_file, AlgebraSpecFile, Directive, DirectiveArg};
pub use enumerate::{enumerate_algebras, enumerate_raw, EnumerationJob, Predicate, Symmetry};
pub use report::{Item, Report, Status, SCHEMA};
pub use verify::{
    classify, corpus_algebra, corpus_algebras, oracle_checks, run_directives, verify_critical_generation,
    verify_main_prime, verify_paper, verify_representations, verify_similarity, zero_tables, Audit, HarnessOptions, Pathway,
};
