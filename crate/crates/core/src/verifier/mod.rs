//! Computational checks of the potential argument and the global bounds.
//!
//! Every report carries `checked`, `passed` and `failures`, plus
//! check-specific detail, and serializes with a stable field order.

pub mod appendix;
pub mod bounds;
pub mod lemmas;
pub mod rounds;
pub mod scans;
