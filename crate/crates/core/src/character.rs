//! Exact characters of the symmetric group.
//!
//! Character values are computed by the Murnaghan-Nakayama rule: peel border
//! strips (one per cycle, longest cycle first) off the Young diagram, summing
//! `(-1)^(height-1)` signs over all consistent tilings. Strips are
//! manipulated through beta numbers (first-column hook lengths), which makes
//! both removal enumeration and the sign a couple of array operations.
//!
//! All values on `S_n` are exact integers; this module contains no floating
//! point except in [`CharacterBoundReport`], which reports the empirical
//! constants of normalized-character inequalities.

use crate::partition::{enumerate_partitions, Partition};
use crate::perm::TranspositionStats;
use crate::scalar::{factorial, Rat};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;

/// A conjugacy class of `S_n`: its cycle type and exact size
/// `n! / prod_k (k^{m_k} m_k!)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleType {
    cycle_type: Partition,
    size: BigInt,
}

impl CycleType {
    pub fn new(cycle_type: Partition) -> Self {
        let size = class_size(&cycle_type);
        CycleType { cycle_type, size }
    }

    pub fn cycle_type(&self) -> &Partition {
        &self.cycle_type
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }
}

/// Exact conjugacy-class size for a cycle type.
pub fn class_size(ct: &Partition) -> BigInt {
    let n = ct.n();
    let mut denom = BigInt::one();
    let mut mult: HashMap<u32, u64> = HashMap::new();
    for &k in ct.parts() {
        *mult.entry(k).or_insert(0) += 1;
    }
    for (k, m) in mult {
        denom *= BigInt::from(k).pow(m as u32);
        denom *= factorial(m);
    }
    factorial(n) / denom
}

/// Beta numbers (first-column hook lengths) of a shape padded to `len` rows.
fn beta_numbers(parts: &[u32], len: usize) -> Vec<u64> {
    debug_assert!(len >= parts.len());
    (0..len)
        .map(|i| {
            let part = parts.get(i).copied().unwrap_or(0) as u64;
            part + (len - 1 - i) as u64
        })
        .collect()
}

/// Shape back from a descending beta set.
fn shape_from_beta(mut beta: Vec<u64>) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    let mut parts: Vec<u32> = beta
        .iter()
        .enumerate()
        .map(|(i, &b)| (b - (len - 1 - i) as u64) as u32)
        .collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

/// All ways to remove a border strip of length `k`: `(new shape, sign)`.
///
/// The number of valid locations is asserted against the `sqrt(2n)` bound on
/// ribbon positions (`count^2 < 2n` for a diagram of `n` cells).
fn strip_removals(parts: &[u32], k: u32) -> Vec<(Vec<u32>, i64)> {
    if parts.is_empty() {
        return Vec::new();
    }
    let len = parts.len();
    let beta = beta_numbers(parts, len);
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < k as u64 {
            continue;
        }
        let target = b - k as u64;
        if beta.contains(&target) {
            continue;
        }
        // Beads strictly between target and b give the strip height minus 1.
        let jumped = beta
            .iter()
            .filter(|&&x| target < x && x < b)
            .count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut new_beta = beta.clone();
        new_beta[i] = target;
        out.push((shape_from_beta(new_beta), sign));
    }
    let cells: u64 = parts.iter().map(|&p| p as u64).sum();
    let count = out.len() as u64;
    assert!(
        count == 0 || count * count < 2 * cells,
        "ribbon locations {count} exceed sqrt(2n) bound for n = {cells}"
    );
    out
}

type Memo = HashMap<(Vec<u32>, usize), i64>;

fn mn_recurse(parts: &[u32], cycles: &[u32], idx: usize, memo: &mut Memo) -> i64 {
    if idx == cycles.len() {
        debug_assert!(parts.is_empty());
        return 1;
    }
    let key = (parts.to_vec(), idx);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0i64;
    for (rest, sign) in strip_removals(parts, cycles[idx]) {
        total += sign * mn_recurse(&rest, cycles, idx + 1, memo);
    }
    memo.insert(key, total);
    total
}

/// Exact character value `χ_λ(π)` for a permutation of cycle type `ct`.
pub fn mn_character(lambda: &Partition, ct: &Partition) -> Result<i64> {
    if lambda.n() != ct.n() {
        return Err(Error::mismatch(format!(
            "irrep partitions {} cells, class partitions {}",
            lambda.n(),
            ct.n()
        )));
    }
    let mut memo = Memo::new();
    Ok(mn_character_with_order(lambda, ct, &mut memo, true))
}

/// Character value with an explicit peel order; `longest_first = false`
/// exercises order independence in tests.
pub fn mn_character_with_order(
    lambda: &Partition,
    ct: &Partition,
    memo: &mut Memo,
    longest_first: bool,
) -> i64 {
    let mut cycles: Vec<u32> = ct.parts().to_vec();
    if longest_first {
        cycles.sort_unstable_by(|a, b| b.cmp(a));
    } else {
        cycles.sort_unstable();
    }
    mn_recurse(lambda.parts(), &cycles, 0, memo)
}

/// Complete character table of `S_n`.
///
/// Rows are irreps in partition-enumeration order (`[n]` first); columns are
/// cycle types in the reversed order, so the identity class `[1^n]` comes
/// first and the dimension sits in column 0.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    n: u32,
    irreps: Vec<Partition>,
    classes: Vec<CycleType>,
    /// entries[row][col]
    entries: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("character table needs n >= 1"));
        }
        if n > 14 {
            return Err(Error::capability(format!(
                "exact full character tables support n <= 14, got {n}"
            )));
        }
        let irreps = enumerate_partitions(n)?;
        let mut class_types = enumerate_partitions(n)?;
        class_types.reverse();
        let classes: Vec<CycleType> = class_types.into_iter().map(CycleType::new).collect();

        // One memo per column: the same residual shapes recur across rows.
        let columns: Vec<Vec<i64>> = classes
            .par_iter()
            .map(|class| {
                let mut memo = Memo::new();
                irreps
                    .iter()
                    .map(|lam| mn_character_with_order(lam, class.cycle_type(), &mut memo, true))
                    .collect()
            })
            .collect();

        let entries: Vec<Vec<i64>> = (0..irreps.len())
            .map(|r| columns.iter().map(|col| col[r]).collect())
            .collect();
        Ok(CharacterTable {
            n,
            irreps,
            classes,
            entries,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row]
    }

    pub fn irrep_index(&self, lambda: &Partition) -> Option<usize> {
        self.irreps.iter().position(|p| p == lambda)
    }

    pub fn class_index(&self, ct: &Partition) -> Option<usize> {
        self.classes.iter().position(|c| c.cycle_type() == ct)
    }

    /// Dimension of an irrep, read off the identity column.
    pub fn dimension(&self, row: usize) -> i64 {
        self.entries[row][0]
    }

    /// `χ_λ(class)` by partition lookup.
    pub fn value(&self, lambda: &Partition, ct: &Partition) -> Result<i64> {
        let r = self
            .irrep_index(lambda)
            .ok_or_else(|| Error::mismatch(format!("irrep {lambda} is not a partition of {}", self.n)))?;
        let c = self
            .class_index(ct)
            .ok_or_else(|| Error::mismatch(format!("class {ct} is not a partition of {}", self.n)))?;
        Ok(self.entries[r][c])
    }

    /// `(1/n!) Σ_classes size · f · g` for integer class functions.
    pub fn inner_product_int(&self, f: &[i64], g: &[i64]) -> Rat {
        assert_eq!(f.len(), self.classes.len());
        assert_eq!(g.len(), self.classes.len());
        let mut num = BigInt::zero();
        for (i, class) in self.classes.iter().enumerate() {
            num += class.size() * BigInt::from(f[i]) * BigInt::from(g[i]);
        }
        Rat::new(num, factorial(self.n as u64))
    }

    /// `(1/n!) Σ_classes size · f · g` for rational class functions.
    pub fn inner_product_rat(&self, f: &[Rat], g: &[Rat]) -> Rat {
        assert_eq!(f.len(), self.classes.len());
        assert_eq!(g.len(), self.classes.len());
        let mut num = Rat::zero();
        for (i, class) in self.classes.iter().enumerate() {
            num += Rat::from_integer(class.size().clone()) * &f[i] * &g[i];
        }
        num / Rat::from_integer(factorial(self.n as u64))
    }

    /// Multiplicity of `τ` in `λ ⊗ μ`: `<χ_τ, χ_λ χ_μ>`, a nonnegative integer.
    pub fn cg_multiplicity(&self, tau: &Partition, lambda: &Partition, mu: &Partition) -> Result<u64> {
        for p in [tau, lambda, mu] {
            if p.n() != self.n as u64 {
                return Err(Error::mismatch(format!(
                    "{p} is not a partition of {}",
                    self.n
                )));
            }
        }
        let rt = self.irrep_index(tau).unwrap();
        let rl = self.irrep_index(lambda).unwrap();
        let rm = self.irrep_index(mu).unwrap();
        Ok(self.cg_multiplicity_by_index(rt, rl, rm))
    }

    pub fn cg_multiplicity_by_index(&self, tau: usize, lambda: usize, mu: usize) -> u64 {
        let mut num = BigInt::zero();
        for (i, class) in self.classes.iter().enumerate() {
            let prod =
                BigInt::from(self.entries[tau][i]) * self.entries[lambda][i] * self.entries[mu][i];
            num += class.size() * prod;
        }
        let (q, r) = num::Integer::div_rem(&num, &factorial(self.n as u64));
        assert!(r.is_zero(), "multiplicity must be an integer");
        assert!(!q.is_negative(), "multiplicity must be nonnegative");
        q.to_u64().expect("multiplicity fits u64")
    }

    /// CSV export: header row of cycle types, one row per irrep.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "irrep\\class")?;
        for class in &self.classes {
            write!(w, ",\"{}\"", class.cycle_type())?;
        }
        writeln!(w)?;
        for (r, lam) in self.irreps.iter().enumerate() {
            write!(w, "\"{lam}\"")?;
            for c in 0..self.classes.len() {
                write!(w, ",{}", self.entries[r][c])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// JSON export with the same ordering contract as the CSV.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "irreps": self.irreps.iter().map(|p| p.to_compact_string()).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| c.cycle_type().to_compact_string()).collect::<Vec<_>>(),
            "class_sizes": self.classes.iter().map(|c| c.size().to_string()).collect::<Vec<_>>(),
            "entries": self.entries,
        })
    }
}

/// Exact smoothness data for one irrep: `Σ_π |χ_λ(π)/d_λ|^4` over the whole
/// group, together with the partial sums for each transposition distance.
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub lambda: Partition,
    /// Full fourth-power sum over all of `S_n`.
    pub sum: Rat,
    /// Partial sums indexed by `t(π) = 0..n-1`.
    pub by_transposition_distance: Vec<Rat>,
}

impl SmoothnessReport {
    /// Sum restricted to classes with `t(π) > cutoff`.
    pub fn tail_sum(&self, cutoff: usize) -> Rat {
        self.by_transposition_distance
            .iter()
            .enumerate()
            .filter(|(t, _)| *t > cutoff)
            .map(|(_, v)| v.clone())
            .sum()
    }
}

/// `Σ_π |χ_λ(π)/d_λ|^4`, computed class-wise in exact arithmetic.
pub fn smoothness_sum(table: &CharacterTable, lambda: &Partition) -> Result<SmoothnessReport> {
    let row = table
        .irrep_index(lambda)
        .ok_or_else(|| Error::mismatch(format!("{lambda} is not a partition of {}", table.n())))?;
    let d = BigInt::from(table.dimension(row));
    let d4 = (&d).pow(4);
    let mut by_t = vec![Rat::zero(); table.n() as usize];
    for (i, class) in table.classes().iter().enumerate() {
        let chi = BigInt::from(table.entry(row, i));
        let chi4 = (&chi).pow(4);
        let term = Rat::new(class.size() * chi4, d4.clone());
        let t = TranspositionStats::of_cycle_type(class.cycle_type()).t;
        by_t[t] += term;
    }
    let sum: Rat = by_t.iter().cloned().sum();
    assert!(sum >= Rat::one(), "identity term alone contributes 1");
    Ok(SmoothnessReport {
        lambda: lambda.clone(),
        sum,
        by_transposition_distance: by_t,
    })
}

/// Constants fed to [`character_bound_report`].
#[derive(Debug, Clone, Copy)]
pub struct BoundConstants {
    /// Constant of the `(A/sqrt(n))^t` long-permutation bound.
    pub a: f64,
    /// Constant of the `(A' max(1, t^2/n)/sqrt(n))^t` balanced-diagram bound.
    pub a_prime: f64,
    /// Balance parameter for the balanced-diagram hypothesis.
    pub d: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            a: 2.0_f64.sqrt() * std::f64::consts::E.powi(2),
            a_prime: 2.0_f64.sqrt() * std::f64::consts::E.powi(2),
            d: 3.0,
        }
    }
}

/// Normalized-character data for one `(λ, class)` cell: the exact ratio
/// `|χ/d|`, the transposition distance, the two bound values at the supplied
/// constants, and the smallest constants that would make each bound hold.
/// No pass/fail verdict is attached: the inequalities' constants are free
/// parameters, so the report only measures them.
#[derive(Debug, Clone)]
pub struct CharacterBoundReport {
    pub lambda: Partition,
    pub class: Partition,
    pub balanced: bool,
    pub ratio_abs: Rat,
    pub t: usize,
    /// `(A/sqrt(n))^t` at the supplied `A`.
    pub long_permutation_bound: f64,
    /// `(A' max(1, t^2/n)/sqrt(n))^t` at the supplied `A'`.
    pub balanced_bound: f64,
    /// Smallest `A` with `|χ/d| <= (A/sqrt(n))^t`; `None` when `t = 0`.
    pub min_a: Option<f64>,
    /// Smallest `A'` with `|χ/d| <= (A' max(1,t^2/n)/sqrt(n))^t`; `None` when `t = 0`.
    pub min_a_prime: Option<f64>,
}

pub fn character_bound_report(
    table: &CharacterTable,
    lambda: &Partition,
    class: &Partition,
    constants: BoundConstants,
) -> Result<CharacterBoundReport> {
    let chi = table.value(lambda, class)?;
    let row = table.irrep_index(lambda).unwrap();
    let d = table.dimension(row);
    let ratio_abs = Rat::new(BigInt::from(chi.abs()), BigInt::from(d));
    let t = TranspositionStats::of_cycle_type(class).t;
    let n = table.n() as f64;
    let sqrt_n = n.sqrt();
    let growth = 1.0_f64.max((t * t) as f64 / n);
    let long_permutation_bound = (constants.a / sqrt_n).powi(t as i32);
    let balanced_bound = (constants.a_prime * growth / sqrt_n).powi(t as i32);
    let ratio_f = ratio_abs.to_f64().unwrap_or(0.0);
    let (min_a, min_a_prime) = if t == 0 {
        (None, None)
    } else if ratio_f == 0.0 {
        (Some(0.0), Some(0.0))
    } else {
        let root = ratio_f.powf(1.0 / t as f64);
        (Some(root * sqrt_n), Some(root * sqrt_n / growth))
    };
    Ok(CharacterBoundReport {
        lambda: lambda.clone(),
        class: class.clone(),
        balanced: lambda.is_balanced(constants.d),
        ratio_abs,
        t,
        long_permutation_bound,
        balanced_bound,
        min_a,
        min_a_prime,
    })
}
