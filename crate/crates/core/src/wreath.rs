//! Irreps of `G ≀ Z₂` built from base-group character data.
//!
//! For a base group with irreps `λ`, the wreath product has inhomogeneous
//! irreps `σ_{λ,μ}` (unordered pairs `λ ≠ μ`, dimension `2 d_λ d_μ`, zero
//! character on flips) and homogeneous irreps `σ^±_{λ,λ}` (dimension `d_λ²`,
//! character `± χ_λ(αβ)` on flips).
//!
//! Everything here reduces to base-group class sums: Plancherel factorizes
//! through the base Plancherel weights, and natural distributions in tensor
//! products are expressed through base tensor multiplicities
//! `M(τ; λ, μ) = <χ_τ, χ_λ χ_μ>`. The formulas for products involving
//! homogeneous factors come from expanding the character products over
//! non-flips and flips; the element-wise computation over the full wreath
//! group validates every case in the tests.

use crate::character::CharacterTable;
use crate::dist::{collision_probability, natural_dist, Distribution};
use crate::group::ConcreteGroup;
use crate::partition::Partition;
use crate::scalar::Rat;
use crate::{Error, Result};
use num::bigint::BigInt;
use std::fmt;

/// Sign of a homogeneous wreath irrep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// An irrep of `S_m ≀ Z₂` named by base partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WreathIrrep {
    /// Unordered pair `λ ≠ μ`; stored with the partition-enumeration-earlier
    /// member first.
    Inhom(Partition, Partition),
    Hom(Partition, Sign),
}

impl WreathIrrep {
    /// Canonical inhomogeneous pair: the lexicographically larger partition
    /// (earlier in enumeration order) first.
    pub fn inhom(a: Partition, b: Partition) -> Result<Self> {
        if a == b {
            return Err(Error::invalid(
                "inhomogeneous irreps need two distinct base irreps",
            ));
        }
        if a > b {
            Ok(WreathIrrep::Inhom(a, b))
        } else {
            Ok(WreathIrrep::Inhom(b, a))
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, WreathIrrep::Hom(..))
    }

    pub fn dim(&self) -> BigInt {
        match self {
            WreathIrrep::Inhom(a, b) => BigInt::from(2) * a.dimension() * b.dimension(),
            WreathIrrep::Hom(a, _) => a.dimension().pow(2),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("inhom:") {
            let (a, b) = rest
                .split_once('|')
                .ok_or_else(|| Error::invalid(format!("bad inhom irrep {s:?}")))?;
            return WreathIrrep::inhom(Partition::parse(a)?, Partition::parse(b)?);
        }
        if let Some(rest) = s.strip_prefix("hom:") {
            let (sign, lam) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid(format!("bad hom irrep {s:?}")))?;
            let sign = match sign {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(Error::invalid(format!("bad hom sign {sign:?}"))),
            };
            return Ok(WreathIrrep::Hom(Partition::parse(lam)?, sign));
        }
        Err(Error::invalid(format!("bad wreath irrep {s:?}")))
    }
}

impl fmt::Display for WreathIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WreathIrrep::Inhom(a, b) => write!(f, "inhom:{a}|{b}"),
            WreathIrrep::Hom(a, s) => {
                write!(f, "hom:{}:{a}", if *s == Sign::Plus { "+" } else { "-" })
            }
        }
    }
}

/// Wreath-product representation data over a symmetric-group base table.
#[derive(Debug, Clone)]
pub struct WreathData<'a> {
    base: &'a CharacterTable,
}

impl<'a> WreathData<'a> {
    pub fn new(base: &'a CharacterTable) -> Self {
        WreathData { base }
    }

    pub fn base(&self) -> &CharacterTable {
        self.base
    }

    /// Order of the wreath group: `2 (m!)²`.
    pub fn order(&self) -> BigInt {
        let f = crate::scalar::factorial(self.base.n() as u64);
        BigInt::from(2) * &f * &f
    }

    /// All wreath irreps in canonical order: inhomogeneous pairs `(i < j)`
    /// by base enumeration, then `(λ, +), (λ, -)` per base irrep.
    pub fn irreps(&self) -> Vec<WreathIrrep> {
        let parts = self.base.irreps();
        let mut out = Vec::new();
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                out.push(WreathIrrep::Inhom(parts[i].clone(), parts[j].clone()));
            }
        }
        for p in parts {
            out.push(WreathIrrep::Hom(p.clone(), Sign::Plus));
            out.push(WreathIrrep::Hom(p.clone(), Sign::Minus));
        }
        out
    }

    /// Plancherel distribution: `2 P(λ)P(μ)` for inhomogeneous irreps,
    /// `P(λ)²/2` for each sign of a homogeneous one. Equals `dim²/(2|G|²)`
    /// entrywise.
    pub fn plancherel(&self) -> Result<Distribution<WreathIrrep>> {
        let order = self.order();
        let entries = self
            .irreps()
            .into_iter()
            .map(|w| {
                let d = w.dim();
                let p = Rat::new(&d * &d, order.clone());
                (w, p)
            })
            .collect();
        Distribution::new(entries)
    }

    /// Base tensor multiplicity `M(τ; λ, μ)` by table indices.
    fn mult(&self, tau: usize, lam: usize, mu: usize) -> i64 {
        self.base.cg_multiplicity_by_index(tau, lam, mu) as i64
    }

    fn base_index(&self, p: &Partition) -> Result<usize> {
        self.base
            .irrep_index(p)
            .ok_or_else(|| Error::mismatch(format!("{p} is not a partition of {}", self.base.n())))
    }

    /// Natural distribution in `σ₁ ⊗ σ₂` over wreath irreps, exact, for all
    /// combinations of homogeneous and inhomogeneous inputs.
    pub fn natural(&self, s1: &WreathIrrep, s2: &WreathIrrep) -> Result<Distribution<WreathIrrep>> {
        let d1 = s1.dim();
        let d2 = s2.dim();
        let denom = d1 * d2;
        let entries = self
            .irreps()
            .into_iter()
            .map(|out| {
                let mult = self.outcome_multiplicity(s1, s2, &out)?;
                let p = Rat::new(out.dim() * BigInt::from(mult), denom.clone());
                Ok((out, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(entries)
    }

    /// Multiplicity of `out` in `σ₁ ⊗ σ₂`, reduced to base-group sums.
    pub fn outcome_multiplicity(
        &self,
        s1: &WreathIrrep,
        s2: &WreathIrrep,
        out: &WreathIrrep,
    ) -> Result<i64> {
        use WreathIrrep::{Hom, Inhom};
        let ix = |p: &Partition| self.base_index(p);
        Ok(match (s1, s2, out) {
            (Inhom(a1, a2), Inhom(b1, b2), Inhom(t1, t2)) => {
                let (a1, a2, b1, b2) = (ix(a1)?, ix(a2)?, ix(b1)?, ix(b2)?);
                let (t1, t2) = (ix(t1)?, ix(t2)?);
                self.mult(t1, a1, b1) * self.mult(t2, a2, b2)
                    + self.mult(t1, a1, b2) * self.mult(t2, a2, b1)
                    + self.mult(t1, a2, b1) * self.mult(t2, a1, b2)
                    + self.mult(t1, a2, b2) * self.mult(t2, a1, b1)
            }
            (Inhom(a1, a2), Inhom(b1, b2), Hom(t, _)) => {
                let (a1, a2, b1, b2) = (ix(a1)?, ix(a2)?, ix(b1)?, ix(b2)?);
                let t = ix(t)?;
                self.mult(t, a1, b1) * self.mult(t, a2, b2)
                    + self.mult(t, a1, b2) * self.mult(t, a2, b1)
            }
            (Hom(v, _), Inhom(b1, b2), Inhom(t1, t2)) | (Inhom(b1, b2), Hom(v, _), Inhom(t1, t2)) => {
                let (v, b1, b2) = (ix(v)?, ix(b1)?, ix(b2)?);
                let (t1, t2) = (ix(t1)?, ix(t2)?);
                self.mult(t1, v, b1) * self.mult(t2, v, b2)
                    + self.mult(t1, v, b2) * self.mult(t2, v, b1)
            }
            (Hom(v, _), Inhom(b1, b2), Hom(t, _)) | (Inhom(b1, b2), Hom(v, _), Hom(t, _)) => {
                let (v, b1, b2) = (ix(v)?, ix(b1)?, ix(b2)?);
                let t = ix(t)?;
                self.mult(t, v, b1) * self.mult(t, v, b2)
            }
            (Hom(v, _), Hom(w, _), Inhom(t1, t2)) => {
                let (v, w) = (ix(v)?, ix(w)?);
                let (t1, t2) = (ix(t1)?, ix(t2)?);
                self.mult(t1, v, w) * self.mult(t2, v, w)
            }
            (Hom(v, sv), Hom(w, sw), Hom(t, st)) => {
                let (vi, wi) = (ix(v)?, ix(w)?);
                let ti = ix(t)?;
                let m = self.mult(ti, vi, wi);
                let s = sv.value() * sw.value() * st.value();
                let num = m * (m + s);
                debug_assert!(num % 2 == 0, "hom⊗hom multiplicity parity");
                num / 2
            }
        })
    }

    /// Probability mass on homogeneous outcomes in `σ₁ ⊗ σ₂`.
    pub fn homogeneous_mass(&self, dist: &Distribution<WreathIrrep>) -> Rat {
        dist.entries()
            .iter()
            .filter(|(k, _)| k.is_homogeneous())
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// Merge the `±` signs of homogeneous entries, giving the probability of
    /// observing either sign of each `σ_{λ,λ}`.
    pub fn merge_hom_signs(
        &self,
        dist: &Distribution<WreathIrrep>,
    ) -> Vec<(WreathIrrep, Rat)> {
        let mut out: Vec<(WreathIrrep, Rat)> = Vec::new();
        for (k, p) in dist.entries() {
            let key = match k {
                WreathIrrep::Hom(lam, _) => WreathIrrep::Hom(lam.clone(), Sign::Plus),
                other => other.clone(),
            };
            if let Some(slot) = out.iter_mut().find(|(existing, _)| *existing == key) {
                slot.1 += p;
            } else {
                out.push((key, p.clone()));
            }
        }
        out
    }
}

/// Exact homogeneous-outcome data for a product of two inhomogeneous irreps.
#[derive(Debug, Clone)]
pub struct HomogeneousOutcome {
    /// Total mass of homogeneous outcomes.
    pub mass: Rat,
    /// `(1/2)(P^coll_{λ⊗μ,λ'⊗μ'} + P^coll_{λ⊗μ',λ'⊗μ})`.
    pub collision_average: Rat,
    /// `max` of the two collision probabilities.
    pub collision_max: Rat,
}

/// Homogeneous-outcome mass of `σ_{λ,λ'} ⊗ σ_{μ,μ'}`, its collision-average
/// form, and the max-of-collisions upper bound. The mass always equals the
/// average and never exceeds the max.
pub fn homogeneous_outcome_prob(
    data: &WreathData,
    s1: &WreathIrrep,
    s2: &WreathIrrep,
) -> Result<HomogeneousOutcome> {
    let (WreathIrrep::Inhom(l, lp), WreathIrrep::Inhom(m, mp)) = (s1, s2) else {
        return Err(Error::invalid(
            "homogeneous_outcome_prob needs two inhomogeneous irreps",
        ));
    };
    let dist = data.natural(s1, s2)?;
    let mass = data.homogeneous_mass(&dist);
    let table = data.base();
    let coll_a = collision_probability(
        &natural_dist(table, l, m)?,
        &natural_dist(table, lp, mp)?,
    );
    let coll_b = collision_probability(
        &natural_dist(table, l, mp)?,
        &natural_dist(table, lp, m)?,
    );
    let collision_average = (&coll_a + &coll_b) / Rat::from_integer(BigInt::from(2));
    let collision_max = coll_a.max(coll_b);
    assert!(
        mass <= collision_max,
        "homogeneous mass must be bounded by the max collision probability"
    );
    Ok(HomogeneousOutcome {
        mass,
        collision_average,
        collision_max,
    })
}

/// Character of a wreath irrep at a wreath element (exact). A thin wrapper
/// over the concrete group's per-element character data.
pub fn wreath_character(group: &ConcreteGroup, irrep: usize, elem: usize) -> Option<i64> {
    group.wreath_base()?;
    group.char_i64(irrep, elem)
}

/// Map a [`WreathIrrep`] to its index in the concrete wreath group built on
/// `S_m`, relying on the shared canonical order.
pub fn irrep_index_in_group(group: &ConcreteGroup, w: &WreathIrrep) -> Option<usize> {
    group.irrep_index_by_name(&w.to_string())
}
