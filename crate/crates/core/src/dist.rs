//! Exact probability distributions over irrep labels.
//!
//! Covers the Plancherel distribution `d²/|G|`, the natural distribution in a
//! tensor product, weak Fourier sampling of an order-two coset state, and the
//! comparison functionals (collision probability, total variation distance)
//! plus the typicality predicate and the natural-vs-Plancherel inequality.

use crate::character::CharacterTable;
use crate::group::ConcreteGroup;
use crate::partition::{enumerate_partitions, Partition};
use crate::scalar::{cmp_guarded, factorial, ln_bigint, Decision, Rat, GUARD_BAND};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, Zero};

/// An exact probability distribution over labels of type `K`, kept in a
/// canonical entry order so serializations are byte-stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution<K> {
    entries: Vec<(K, Rat)>,
}

impl<K: Clone + Eq> Distribution<K> {
    /// Build from entries already in canonical order; checks nonnegativity
    /// and exact normalization.
    pub fn new(entries: Vec<(K, Rat)>) -> Result<Self> {
        let mut sum = Rat::zero();
        for (_, p) in &entries {
            if p.is_negative() {
                return Err(Error::invalid("negative probability"));
            }
            sum += p;
        }
        if sum != Rat::one() {
            return Err(Error::invalid(format!(
                "probabilities sum to {sum}, expected exactly 1"
            )));
        }
        Ok(Distribution { entries })
    }

    pub fn entries(&self) -> &[(K, Rat)] {
        &self.entries
    }

    pub fn prob(&self, key: &K) -> Rat {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.entries
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, _)| k)
    }

    pub fn map_keys<L: Clone + Eq>(&self, f: impl Fn(&K) -> L) -> Distribution<L> {
        Distribution {
            entries: self.entries.iter().map(|(k, p)| (f(k), p.clone())).collect(),
        }
    }
}

/// `Σ_k p(k) q(k)`: the probability that independent draws collide.
pub fn collision_probability<K: Clone + Eq>(p: &Distribution<K>, q: &Distribution<K>) -> Rat {
    let mut total = Rat::zero();
    for (k, pv) in p.entries() {
        if pv.is_zero() {
            continue;
        }
        total += pv * q.prob(k);
    }
    total
}

/// Total variation distance `(1/2) Σ_k |p(k) - q(k)|` over the key union.
pub fn tvd<K: Clone + Eq>(p: &Distribution<K>, q: &Distribution<K>) -> Rat {
    let mut total = Rat::zero();
    for (k, pv) in p.entries() {
        total += (pv - q.prob(k)).abs();
    }
    // Keys present only in q.
    for (k, qv) in q.entries() {
        if p.entries.iter().all(|(pk, _)| pk != k) {
            total += qv.abs();
        }
    }
    total / Rat::from_integer(BigInt::from(2))
}

/// Plancherel distribution of `S_n`: `d_λ² / n!` in partition order.
pub fn plancherel_dist(n: u32) -> Result<Distribution<Partition>> {
    if n == 0 {
        return Err(Error::invalid("plancherel_dist needs n >= 1"));
    }
    if n > 14 {
        return Err(Error::capability(format!(
            "exact plancherel_dist supports n <= 14, got {n}"
        )));
    }
    let nf = factorial(n as u64);
    let entries = enumerate_partitions(n)?
        .into_iter()
        .map(|p| {
            let d = p.dimension();
            let prob = Rat::new(&d * &d, nf.clone());
            (p, prob)
        })
        .collect();
    Distribution::new(entries)
}

/// Plancherel self-collision `Σ_λ (d_λ²/n!)²`: the chance two independent
/// Plancherel draws agree. Exact for any listable `n`.
pub fn plancherel_self_collision(n: u32) -> Result<Rat> {
    let nf = factorial(n as u64);
    let nf2 = &nf * &nf;
    let mut num = BigInt::zero();
    for p in enumerate_partitions(n)? {
        let d = p.dimension();
        num += (&d * &d).pow(2);
    }
    Ok(Rat::new(num, nf2))
}

/// Natural distribution in `λ ⊗ μ`: each `τ` with probability
/// `d_τ <χ_τ, χ_λ χ_μ> / (d_λ d_μ)`.
pub fn natural_dist(
    table: &CharacterTable,
    lambda: &Partition,
    mu: &Partition,
) -> Result<Distribution<Partition>> {
    let n = table.n() as u64;
    if lambda.n() != n || mu.n() != n {
        return Err(Error::mismatch(format!(
            "natural_dist needs partitions of {n}"
        )));
    }
    let rl = table.irrep_index(lambda).unwrap();
    let rm = table.irrep_index(mu).unwrap();
    let denom = BigInt::from(table.dimension(rl)) * BigInt::from(table.dimension(rm));
    let entries = table
        .irreps()
        .iter()
        .enumerate()
        .map(|(rt, tau)| {
            let mult = table.cg_multiplicity_by_index(rt, rl, rm);
            let prob = Rat::new(
                BigInt::from(table.dimension(rt)) * BigInt::from(mult),
                denom.clone(),
            );
            (tau.clone(), prob)
        })
        .collect();
    Distribution::new(entries)
}

/// Weak Fourier sampling of the coset state of `H = {1, m}` on any group
/// with exact dimension data: `P(σ) = (d_σ/|G|)(d_σ + χ_σ(m))`, the
/// specialization of `P(σ) = (d_σ/|G|) Σ_{h∈H} χ_σ(h)`.
///
/// With `m` the identity, `H` collapses to the trivial subgroup and the
/// distribution is Plancherel. Keys are irrep indices into `group.irreps()`.
pub fn coset_leaf_dist(group: &ConcreteGroup, m: usize) -> Result<Distribution<usize>> {
    let trivial = m == group.identity();
    if !trivial && !group.is_involution(m) {
        return Err(Error::NotAnInvolution);
    }
    let order = BigInt::from(group.order());
    let entries = group
        .irreps()
        .iter()
        .enumerate()
        .map(|(idx, info)| {
            let chi_m = if trivial {
                0
            } else {
                group.char_i64(idx, m).ok_or_else(|| {
                    Error::invalid("coset_leaf_dist needs an exact character value at m")
                })?
            };
            let d = BigInt::from(info.dim);
            let p = Rat::new(&d * (&d + BigInt::from(chi_m)), order.clone());
            if p.is_negative() {
                return Err(Error::invalid(format!(
                    "negative coset probability at irrep {}",
                    info.name
                )));
            }
            Ok((idx, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(entries)
}

/// How the dimension-threshold comparison was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdDecision {
    /// Exact integer comparison (perfect-square `n`).
    Exact,
    /// Log-domain comparison, margin comfortably outside the guard band.
    LogDomain,
    /// Inside the guard band and not exactly decidable; flagged.
    TooClose,
}

/// Typicality verdict for an irrep of `S_n`: balanced diagram and dimension
/// above `e^{-(1/2)√n ln n} √(n!)`.
#[derive(Debug, Clone)]
pub struct TypicalityVerdict {
    pub lambda: Partition,
    pub balanced: bool,
    pub dim_pass: Option<bool>,
    pub overall: Option<bool>,
    pub decision: ThresholdDecision,
}

/// Parameters for the typicality predicate. Logs are natural; `d` defaults
/// to 3 (the smallest integer exceeding `e`).
#[derive(Debug, Clone, Copy)]
pub struct TypicalityParams {
    pub d: f64,
    pub guard_band: f64,
}

impl Default for TypicalityParams {
    fn default() -> Self {
        TypicalityParams {
            d: 3.0,
            guard_band: GUARD_BAND,
        }
    }
}

/// Evaluate the typicality predicate.
///
/// The dimension threshold `d_λ > e^{-(1/2)√n ln n} √(n!)` is decided as
/// `2 ln d_λ + √n ln n > ln n!`. When `n` is a perfect square the comparison
/// is exact: `d² · n^√n > n!` over big integers. Otherwise it runs in the
/// log domain and lands in `TooClose` if inside the guard band.
pub fn is_typical(lambda: &Partition, params: TypicalityParams) -> TypicalityVerdict {
    let n = lambda.n();
    let balanced = lambda.is_balanced(params.d);
    let (dim_pass, decision) = dimension_threshold(lambda, params.guard_band);
    let overall = dim_pass.map(|dp| balanced && dp);
    // A failed balance check decides the verdict even when the dimension
    // comparison is too close to call.
    let overall = if !balanced { Some(false) } else { overall };
    debug_assert!(n > 0 || overall == Some(false) || balanced);
    TypicalityVerdict {
        lambda: lambda.clone(),
        balanced,
        dim_pass,
        overall,
        decision,
    }
}

fn dimension_threshold(lambda: &Partition, band: f64) -> (Option<bool>, ThresholdDecision) {
    let n = lambda.n();
    if n == 0 {
        return (Some(true), ThresholdDecision::Exact);
    }
    let sqrt_n = (n as f64).sqrt();
    let isqrt = sqrt_n.round() as u64;
    let perfect_square = isqrt * isqrt == n;

    let exact_compare = |lambda: &Partition| -> bool {
        // d² n^√n > n!, decidable exactly when √n is an integer.
        let d = lambda.dimension();
        let lhs = &d * &d * BigInt::from(n).pow(isqrt as u32);
        lhs > factorial(n)
    };

    // Small perfect squares: exact integers are cheap, skip the log domain.
    if perfect_square && n <= 144 {
        return (Some(exact_compare(lambda)), ThresholdDecision::Exact);
    }

    let ln_d = if n <= 300 {
        ln_bigint(&lambda.dimension())
    } else {
        lambda.ln_dimension()
    };
    let lhs = 2.0 * ln_d + sqrt_n * (n as f64).ln();
    let rhs = crate::scalar::ln_factorial(n);
    match cmp_guarded(lhs, rhs, band) {
        Decision::Greater => (Some(true), ThresholdDecision::LogDomain),
        Decision::Smaller => (Some(false), ThresholdDecision::LogDomain),
        Decision::TooClose if perfect_square && n <= 4000 => {
            (Some(exact_compare(lambda)), ThresholdDecision::Exact)
        }
        Decision::TooClose => (None, ThresholdDecision::TooClose),
    }
}

/// Result of the natural-vs-Plancherel comparison
/// `P_{λ⊗μ}(X) ≤ sqrt(P_planch(X)) · sqrt(Σ_g |χ_ρ(g)/d_ρ|²)` with
/// `ρ = λ ⊗ μ`. Both sides are handled exactly by comparing squares.
#[derive(Debug, Clone)]
pub struct NatPlanchReport {
    pub lhs: Rat,
    /// The product `P_planch(X) · Σ_g |χ_ρ(g)/d_ρ|²` (the squared rhs).
    pub rhs_squared: Rat,
    pub holds: bool,
}

pub fn nat_planch_check(
    table: &CharacterTable,
    lambda: &Partition,
    mu: &Partition,
    x: &[Partition],
) -> Result<NatPlanchReport> {
    let nat = natural_dist(table, lambda, mu)?;
    let mut lhs = Rat::zero();
    for tau in x {
        lhs += nat.prob(tau);
    }
    let planch = plancherel_dist(table.n())?;
    let mut planch_x = Rat::zero();
    for tau in x {
        planch_x += planch.prob(tau);
    }
    // Σ_g |χ_ρ(g)/d_ρ|² with χ_ρ = χ_λ χ_μ, class-wise, NOT normalized by |G|.
    let rl = table.irrep_index(lambda).unwrap();
    let rm = table.irrep_index(mu).unwrap();
    let d_rho = BigInt::from(table.dimension(rl)) * BigInt::from(table.dimension(rm));
    let mut s2 = Rat::zero();
    for (c, class) in table.classes().iter().enumerate() {
        let chi = BigInt::from(table.entry(rl, c)) * BigInt::from(table.entry(rm, c));
        s2 += Rat::new(class.size() * (&chi * &chi), &d_rho * &d_rho);
    }
    let rhs_squared = planch_x * s2;
    let holds = &lhs * &lhs <= rhs_squared;
    Ok(NatPlanchReport {
        lhs,
        rhs_squared,
        holds,
    })
}

/// JSON for a partition-keyed distribution, matching the external schema:
/// `{"n":…, "kind":…, "entries":[{"partition":"a,b,c","p":"num/den"}]}`.
pub fn partition_dist_json(n: u32, kind: &str, dist: &Distribution<Partition>) -> serde_json::Value {
    serde_json::json!({
        "n": n,
        "kind": kind,
        "entries": dist
            .entries()
            .iter()
            .map(|(p, prob)| {
                serde_json::json!({
                    "partition": p.to_compact_string(),
                    "p": crate::scalar::rat_string(prob),
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// Render `ThresholdDecision` for reports.
impl std::fmt::Display for ThresholdDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdDecision::Exact => write!(f, "exact"),
            ThresholdDecision::LogDomain => write!(f, "log-domain"),
            ThresholdDecision::TooClose => write!(f, "too-close"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_dihedral, make_symmetric};
    use crate::scalar::{rat, rat_int};
    use num::ToPrimitive;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn plancherel_examples() {
        let p3 = plancherel_dist(3).unwrap();
        assert_eq!(p3.prob(&part(&[3])), rat(1, 6));
        assert_eq!(p3.prob(&part(&[2, 1])), rat(2, 3));
        assert_eq!(p3.prob(&part(&[1, 1, 1])), rat(1, 6));
        let p1 = plancherel_dist(1).unwrap();
        assert_eq!(p1.prob(&part(&[1])), rat_int(1));
        let p4 = plancherel_dist(4).unwrap();
        assert_eq!(p4.prob(&part(&[3, 1])), rat(9, 24));
        assert!(plancherel_dist(15).is_err());
    }

    #[test]
    fn natural_examples() {
        let t = CharacterTable::new(3).unwrap();
        let std = part(&[2, 1]);
        let nat = natural_dist(&t, &std, &std).unwrap();
        assert_eq!(nat.prob(&part(&[3])), rat(1, 4));
        assert_eq!(nat.prob(&part(&[1, 1, 1])), rat(1, 4));
        assert_eq!(nat.prob(&std), rat(1, 2));
        // Tensoring with the trivial rep: point mass.
        let point = natural_dist(&t, &std, &Partition::row(3)).unwrap();
        assert_eq!(point.prob(&std), rat_int(1));
        assert!(natural_dist(&t, &std, &part(&[2])).is_err());
    }

    #[test]
    fn natural_always_normalizes_up_to_8() {
        // Distribution::new asserts exact normalization; constructing is the test.
        for n in 1..=8u32 {
            let t = CharacterTable::new(n).unwrap();
            for a in t.irreps() {
                for b in t.irreps() {
                    natural_dist(&t, a, b).unwrap();
                }
            }
        }
    }

    #[test]
    fn coset_examples() {
        let s3 = make_symmetric(3).unwrap();
        // m = a transposition; canonical class rep of cycle type [2,1].
        let m = s3
            .classes()
            .unwrap()
            .iter()
            .find(|c| c.cycle_type.as_ref().unwrap().parts() == [2, 1])
            .unwrap()
            .rep
            .unwrap();
        let dist = coset_leaf_dist(&s3, m).unwrap();
        let name_of = |i: usize| s3.irreps()[i].name.clone();
        let mut by_name: Vec<(String, Rat)> = dist
            .entries()
            .iter()
            .map(|(i, p)| (name_of(*i), p.clone()))
            .collect();
        by_name.sort();
        assert_eq!(
            by_name,
            vec![
                ("1,1,1".to_string(), rat_int(0)),
                ("2,1".to_string(), rat(2, 3)),
                ("3".to_string(), rat(1, 3)),
            ]
        );
        // m = identity reduces to Plancherel.
        let planch = coset_leaf_dist(&s3, s3.identity()).unwrap();
        assert_eq!(planch.prob(&1), rat(2, 3));
        // Non-involutions rejected: a 3-cycle.
        let three = s3
            .classes()
            .unwrap()
            .iter()
            .find(|c| c.cycle_type.as_ref().unwrap().parts() == [3])
            .unwrap()
            .rep
            .unwrap();
        assert!(coset_leaf_dist(&s3, three).is_err());
    }

    #[test]
    fn dihedral_sign_is_missing_harmonic() {
        for n in [4u32, 5, 6, 7, 8] {
            let d = make_dihedral(n).unwrap();
            let m = d.dihedral_reflection(0).unwrap();
            let dist = coset_leaf_dist(&d, m).unwrap();
            let sgn = d.irrep_index_by_name("sgn").unwrap();
            assert!(dist.prob(&sgn).is_zero(), "D_{n}");
        }
    }

    #[test]
    fn coset_values_nonnegative_all_involutions_up_to_8() {
        // d_σ + χ_σ(m) >= 0 over every involution class of S_n.
        for n in 2..=8u32 {
            let t = CharacterTable::new(n).unwrap();
            for (c, class) in t.classes().iter().enumerate() {
                let ct = class.cycle_type();
                let is_involution =
                    ct.parts().iter().all(|&k| k <= 2) && ct.parts().iter().any(|&k| k == 2);
                if !is_involution {
                    continue;
                }
                for r in 0..t.irreps().len() {
                    assert!(
                        t.dimension(r) + t.entry(r, c) >= 0,
                        "n={n} irrep {} class {}",
                        t.irreps()[r],
                        ct
                    );
                }
            }
        }
    }

    #[test]
    fn collision_examples() {
        let uniform = Distribution::new(vec![
            (0usize, rat(1, 4)),
            (1, rat(1, 4)),
            (2, rat(1, 4)),
            (3, rat(1, 4)),
        ])
        .unwrap();
        assert_eq!(collision_probability(&uniform, &uniform), rat(1, 4));
        let a = Distribution::new(vec![(0usize, rat_int(1)), (1, rat_int(0))]).unwrap();
        let b = Distribution::new(vec![(0usize, rat_int(0)), (1, rat_int(1))]).unwrap();
        assert_eq!(collision_probability(&a, &b), rat_int(0));
        // S_3 natural std ⊗ std with itself.
        let t = CharacterTable::new(3).unwrap();
        let std = part(&[2, 1]);
        let nat = natural_dist(&t, &std, &std).unwrap();
        assert_eq!(collision_probability(&nat, &nat), rat(3, 8));
    }

    #[test]
    fn tvd_examples() {
        let a = Distribution::new(vec![(0usize, rat(1, 2)), (1, rat(1, 2))]).unwrap();
        assert_eq!(tvd(&a, &a), rat_int(0));
        let b = Distribution::new(vec![(0usize, rat_int(1)), (1, rat_int(0))]).unwrap();
        assert_eq!(tvd(&a, &b), rat(1, 2));
        let c = Distribution::new(vec![(2usize, rat_int(1))]).unwrap();
        assert_eq!(tvd(&b, &c), rat_int(1));
    }

    #[test]
    fn typicality_examples() {
        // [n] becomes atypical once the threshold exceeds 1; true at n = 4.
        let v4 = is_typical(&Partition::row(4), TypicalityParams::default());
        assert_eq!(v4.decision, ThresholdDecision::Exact);
        assert_eq!(v4.dim_pass, Some(false));
        assert_eq!(v4.overall, Some(false));
        // Transpose symmetry.
        let v4c = is_typical(&Partition::column(4), TypicalityParams::default());
        assert_eq!(v4c.overall, v4.overall);
        // A balanced staircase at n = 25 is typical.
        let stair = part(&[6, 5, 5, 4, 3, 2]);
        assert_eq!(stair.n(), 25);
        let v = is_typical(&stair, TypicalityParams::default());
        assert!(v.balanced);
        assert_eq!(v.overall, Some(true));
        assert_eq!(v.decision, ThresholdDecision::Exact);
        // Unbalanced diagrams fail regardless of dimension.
        let vrow = is_typical(&Partition::row(25), TypicalityParams::default());
        assert_eq!(vrow.overall, Some(false));
        assert!(!vrow.balanced);
    }

    #[test]
    fn typicality_log_domain_agrees_with_exact_near_squares() {
        // n = 10 is not a perfect square: log-domain decisions only. Check
        // agreement with the exact inequality evaluated at high margin.
        for lam in enumerate_partitions(10).unwrap() {
            let v = is_typical(&lam, TypicalityParams::default());
            assert_ne!(v.decision, ThresholdDecision::TooClose, "{lam}");
            let d = lam.dimension().to_f64().unwrap();
            let lhs = 2.0 * d.ln() + 10.0_f64.sqrt() * 10.0_f64.ln();
            let rhs = crate::scalar::ln_factorial(10);
            assert_eq!(v.dim_pass, Some(lhs > rhs), "{lam}");
        }
    }

    #[test]
    fn nat_planch_trivial_cases() {
        let t = CharacterTable::new(4).unwrap();
        let std = part(&[3, 1]);
        let all = enumerate_partitions(4).unwrap();
        let rep = nat_planch_check(&t, &std, &std, &all).unwrap();
        assert_eq!(rep.lhs, rat_int(1));
        assert!(rep.rhs_squared >= rat_int(1));
        assert!(rep.holds);
        let empty = nat_planch_check(&t, &std, &std, &[]).unwrap();
        assert_eq!(empty.lhs, rat_int(0));
        assert_eq!(empty.rhs_squared, rat_int(0));
        assert!(empty.holds);
    }

    #[test]
    fn nat_planch_exhaustive_singletons_n_le_6() {
        for n in 1..=6u32 {
            let t = CharacterTable::new(n).unwrap();
            let parts = enumerate_partitions(n).unwrap();
            for a in &parts {
                for b in &parts {
                    for x in &parts {
                        let rep = nat_planch_check(&t, a, b, std::slice::from_ref(x)).unwrap();
                        assert!(rep.holds, "n={n} {a} {b} X={{{x}}}");
                    }
                }
            }
        }
    }

    #[test]
    fn plancherel_self_collision_bounded_by_max() {
        for n in 1..=14u32 {
            let coll = plancherel_self_collision(n).unwrap();
            let mut max = Rat::zero();
            let nf = factorial(n as u64);
            for p in enumerate_partitions(n).unwrap() {
                let d = p.dimension();
                max = max.max(Rat::new(&d * &d, nf.clone()));
            }
            assert!(coll <= max, "n={n}");
        }
        assert_eq!(plancherel_self_collision(3).unwrap(), rat(1, 2));
        assert_eq!(plancherel_self_collision(4).unwrap(), rat(5, 16));
    }

    #[test]
    fn distribution_rejects_bad_input() {
        assert!(Distribution::new(vec![(0usize, rat(1, 2))]).is_err());
        assert!(Distribution::new(vec![(0usize, rat(-1, 2)), (1, rat(3, 2))]).is_err());
    }
}
