//! Executable checkers for the structural identities of the integral.
//!
//! Every checker computes both sides of an identity through different code
//! paths and compares canonical forms exactly. Randomized suites are seeded
//! and reproducible; see [`suites`].

mod checks;
pub mod suites;

use std::fmt;

use serde::Serialize;

pub use checks::{
    check_additivity, check_altexp, check_can_degree, check_cov, check_csm_normalization,
    check_denloe, check_key, check_necfacts, check_specialization, check_spell_elgen, CovSide,
    DenloeSet, SpellData,
};

/// Outcome of one check: both sides rendered, `passed` iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
    pub context: String,
}

impl CheckReport {
    pub fn compare<T: PartialEq + fmt::Display>(
        name: impl Into<String>,
        context: impl Into<String>,
        lhs: &T,
        rhs: &T,
    ) -> CheckReport {
        CheckReport {
            name: name.into(),
            passed: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            context: context.into(),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, rel) = if self.passed { ("PASS", "==") } else { ("FAIL", "!=") };
        write!(f, "{tag} {} [{}]: {} {rel} {}", self.name, self.context, self.lhs, self.rhs)
    }
}
