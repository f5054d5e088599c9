//! Finite Kripke models: evaluation of modal formulas and of their HOL
//! translations, frame and domain checks, and bounded countermodel search.

pub mod eval;
pub mod fixture;
pub mod model;
pub mod search;

pub use eval::{correspondence_check, eval_fml, eval_hol, eval_validity, Assignment, EvalError, Value};
pub use fixture::{parse_model, print_model, FixtureError};
pub use model::{check_domains, check_frame, domain_violation, frame_violation, DomainViolation, KripkeModel};
pub use search::{find_countermodel, verify_countermodel, SearchBounds, SearchError, SearchResult};
