//! Cyclic quotient singularity types 1/m(a_1, .., a_n): age of group
//! elements, the Reid–Tai discrepancy classification, and a canonical form
//! under the isomorphisms that permute coordinates or replace the generator
//! by another generator of the same cyclic group.

use num::integer::gcd;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::cyclotomic::{rat, Rat};
use crate::error::{Error, Result};

/// The type 1/m(a_1, .., a_n) of a cyclic quotient singularity: the quotient
/// of C^n by the diagonal action with eigenvalue exponents a_i on a fixed
/// primitive m-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicSingularityType {
    pub m: u64,
    pub weights: Vec<u64>,
}

/// Discrepancy classification of a quotient singularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReidTaiClass {
    Terminal,
    CanonicalNotTerminal,
    Noncanonical,
}

impl fmt::Display for CyclicSingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(", self.m)?;
        for (i, a) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, ")")
    }
}

impl CyclicSingularityType {
    pub fn new(m: u64, weights: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::usage("singularity order m must be at least 2"));
        }
        if weights.is_empty() {
            return Err(Error::usage("singularity type needs at least one weight"));
        }
        if weights.iter().any(|&a| a == 0 || a >= m) {
            return Err(Error::usage(format!(
                "weights of 1/{}(..) must lie in 1..{}",
                m, m
            )));
        }
        Ok(CyclicSingularityType { m, weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The action is free outside the origin precisely when every weight is
    /// coprime to m (no coordinate hyperplane is fixed by a nontrivial power).
    pub fn is_isolated(&self) -> bool {
        self.weights.iter().all(|&a| gcd(a, self.m) == 1)
    }

    /// age(j) = (1/m) * sum_i ((j a_i) mod m) for the j-th power of the
    /// distinguished generator.
    pub fn age(&self, j: u64) -> Rat {
        let m = self.m;
        let s: u64 = self.weights.iter().map(|&a| (j % m) * a % m).sum();
        rat(s as i64, m as i64)
    }

    /// Reid–Tai: the singularity is canonical iff age(j) >= 1 for all
    /// nontrivial j, terminal iff age(j) > 1 for all nontrivial j.
    pub fn reid_tai_class(&self) -> ReidTaiClass {
        let one = rat(1, 1);
        let mut min_age: Option<Rat> = None;
        for j in 1..self.m {
            let a = self.age(j);
            if min_age.as_ref().map_or(true, |m| &a < m) {
                min_age = Some(a);
            }
        }
        let min_age = min_age.expect("m >= 2 gives at least one nontrivial power");
        if min_age > one {
            ReidTaiClass::Terminal
        } else if min_age == one {
            ReidTaiClass::CanonicalNotTerminal
        } else {
            ReidTaiClass::Noncanonical
        }
    }

    /// Minimum of age(j) over nontrivial j, the quantity Reid–Tai compares
    /// to 1.
    pub fn min_age(&self) -> Rat {
        (1..self.m)
            .map(|j| self.age(j))
            .min()
            .expect("m >= 2 gives at least one nontrivial power")
    }

    /// Canonical representative of the isomorphism class: multiply the
    /// weights by each unit u mod m (re-choosing the generator), sort each
    /// result, and keep the lexicographically smallest weight vector.
    pub fn canonical_form(&self) -> CyclicSingularityType {
        let m = self.m;
        let mut best: Option<Vec<u64>> = None;
        for u in 1..m {
            if gcd(u, m) != 1 {
                continue;
            }
            let mut w: Vec<u64> = self.weights.iter().map(|&a| a * u % m).collect();
            w.sort_unstable();
            if best.as_ref().map_or(true, |b| &w < b) {
                best = Some(w);
            }
        }
        CyclicSingularityType {
            m,
            weights: best.expect("u = 1 is always a unit"),
        }
    }
}
