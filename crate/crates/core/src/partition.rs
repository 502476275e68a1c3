//! Young diagrams: enumeration, hook-length dimensions, transposes, balance
//! predicates and Plancherel sampling through the Robinson-Schensted
//! correspondence.

use crate::perm::Perm;
use crate::scalar::{factorial, Rat};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Zero};
use rand::Rng;
use std::fmt;

/// An integer partition `λ₁ ≥ λ₂ ≥ … ≥ λ_r > 0`, possibly empty.
///
/// Partitions index both the irreps of `S_n` (rows of the character table)
/// and its conjugacy classes (cycle types).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::invalid("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("partition parts must be weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Single row `[n]` (the trivial irrep of `S_n`); `[0]` is the empty one.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// Single column `[1^n]` (the sign irrep of `S_n`).
    pub fn column(n: u32) -> Self {
        Partition {
            parts: vec![1; n as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn first_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Conjugate (transposed) diagram.
    pub fn transpose(&self) -> Partition {
        let width = self.first_part() as usize;
        let mut cols = vec![0u32; width];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }

    /// Both the number of rows and the first part are `< d * sqrt(n)`.
    ///
    /// The comparison is exact: `d` (an arbitrary float) is treated as the
    /// rational it is, and `rows < d√n` is decided as `rows² < d²·n` in
    /// rational arithmetic.
    pub fn is_balanced(&self, d: f64) -> bool {
        assert!(d > 0.0, "balance parameter must be positive");
        let dr = Rat::from_float(d).expect("finite balance parameter");
        let d2n = &dr * &dr * Rat::from_integer(BigInt::from(self.n()));
        let side = |len: u64| -> bool {
            let len = Rat::from_integer(BigInt::from(len));
            &len * &len < d2n
        };
        side(self.rows() as u64) && side(self.first_part() as u64)
    }

    /// Hook length of the cell `(r, c)` (zero-based).
    fn hook(&self, transpose: &Partition, r: usize, c: usize) -> u64 {
        let arm = self.parts[r] as u64 - c as u64 - 1;
        let leg = transpose.parts[c] as u64 - r as u64 - 1;
        arm + leg + 1
    }

    /// Exact irrep dimension `n! / ∏ hooks`.
    pub fn dimension(&self) -> BigInt {
        let n = self.n();
        if n == 0 {
            return BigInt::one();
        }
        let t = self.transpose();
        let mut hooks = BigInt::one();
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len as usize {
                hooks *= self.hook(&t, r, c);
            }
        }
        let (q, rem) = num::Integer::div_rem(&factorial(n), &hooks);
        debug_assert!(rem.is_zero(), "hook product must divide n!");
        q
    }

    /// `ln` of the dimension, computed from hook lengths in the log domain.
    /// Suitable for `n` far beyond exact-integer range.
    pub fn ln_dimension(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 0.0;
        }
        let t = self.transpose();
        let mut ln_hooks = 0.0;
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len as usize {
                ln_hooks += (self.hook(&t, r, c) as f64).ln();
            }
        }
        crate::scalar::ln_factorial(n) - ln_hooks
    }

    /// Serialize as comma-joined parts; the empty partition is "".
    pub fn to_compact_string(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts: Vec<u32> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad partition part {t:?}")))
            })
            .collect::<Result<_>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_compact_string())
    }
}

/// All partitions of `n` in reverse-lexicographic order: `[n]` first,
/// `[1^n]` last. The order is the canonical row/column order everywhere.
pub fn enumerate_partitions(n: u32) -> Result<Vec<Partition>> {
    if n > 60 {
        return Err(Error::capability(format!(
            "partition list mode supports n <= 60, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, &mut current, &mut out);
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    let hi = remaining.min(max_part);
    for p in (1..=hi).rev() {
        current.push(p);
        descend(remaining - p, p, current, out);
        current.pop();
    }
}

/// `p(0..=n)` by Euler's pentagonal-number recurrence, exact.
pub fn partition_counts(n: u32) -> Vec<BigInt> {
    let n = n as usize;
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for i in 1..=n {
        let mut acc = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign_pos = k % 2 == 1;
            if sign_pos {
                acc += &p[i - g1];
            } else {
                acc -= &p[i - g1];
            }
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                if sign_pos {
                    acc += &p[i - g2];
                } else {
                    acc -= &p[i - g2];
                }
            }
            k += 1;
        }
        p[i] = acc;
    }
    p
}

/// Insertion tableau used by row-insertion RSK. Rows strictly increase
/// left to right; only the shape is exposed.
#[derive(Debug, Default)]
struct InsertionTableau {
    rows: Vec<Vec<u32>>,
}

impl InsertionTableau {
    fn insert(&mut self, mut x: u32) {
        for row in &mut self.rows {
            match row.binary_search(&x) {
                Ok(_) => unreachable!("permutation entries are distinct"),
                Err(pos) => {
                    if pos == row.len() {
                        row.push(x);
                        return;
                    }
                    std::mem::swap(&mut row[pos], &mut x);
                }
            }
        }
        self.rows.push(vec![x]);
    }

    fn shape(&self) -> Partition {
        Partition {
            parts: self.rows.iter().map(|r| r.len() as u32).collect(),
        }
    }
}

/// Shape of the RSK insertion tableau of a permutation. The first row length
/// equals the longest increasing subsequence, the first column the longest
/// decreasing one.
pub fn rsk_shape(p: &Perm) -> Partition {
    let mut t = InsertionTableau::default();
    for i in 0..p.n() {
        t.insert(p.image(i) as u32);
    }
    t.shape()
}

/// Sample a Plancherel-distributed partition of `n`: uniform permutation
/// followed by RSK.
pub fn plancherel_sample<R: Rng>(n: u32, rng: &mut R) -> Result<Partition> {
    if n == 0 {
        return Err(Error::invalid("plancherel_sample needs n >= 1"));
    }
    if n > 100_000 {
        return Err(Error::capability(format!(
            "plancherel_sample supports n <= 100000, got {n}"
        )));
    }
    let p = Perm::random(n as usize, rng);
    Ok(rsk_shape(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{lds_length, lis_length};
    use num::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_partitions(4).unwrap().len(), 5);
        assert_eq!(
            enumerate_partitions(1).unwrap(),
            vec![Partition::new(vec![1]).unwrap()]
        );
        assert_eq!(enumerate_partitions(10).unwrap().len(), 42);
        let four = enumerate_partitions(4).unwrap();
        let strings: Vec<String> = four.iter().map(|p| p.to_compact_string()).collect();
        assert_eq!(strings, vec!["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        // Counts agree with the pentagonal recurrence oracle.
        let counts = partition_counts(20);
        for n in 0..=20u32 {
            let listed = enumerate_partitions(n).unwrap().len();
            assert_eq!(BigInt::from(listed), counts[n as usize]);
        }
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(enumerate_partitions(61).is_err());
    }

    /// Brute-force count of standard Young tableaux by recursive corner
    /// removal; independent oracle for the hook-length formula.
    fn syt_count(p: &Partition) -> BigInt {
        if p.n() == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        let parts = p.parts();
        for r in 0..parts.len() {
            let is_corner = r + 1 == parts.len() || parts[r + 1] < parts[r];
            if is_corner {
                let mut q = parts.to_vec();
                q[r] -= 1;
                if q[r] == 0 {
                    q.remove(r);
                }
                total += syt_count(&Partition::new(q).unwrap());
            }
        }
        total
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(Partition::row(7).dimension(), BigInt::one());
        assert_eq!(
            Partition::new(vec![2, 1]).unwrap().dimension(),
            BigInt::from(2)
        );
        assert_eq!(
            Partition::new(vec![3, 2, 1]).unwrap().dimension(),
            BigInt::from(16)
        );
    }

    #[test]
    fn dimension_matches_tableau_count_n_le_8() {
        for n in 0..=8u32 {
            for p in enumerate_partitions(n).unwrap() {
                assert_eq!(p.dimension(), syt_count(&p), "partition {p}");
            }
        }
    }

    #[test]
    fn dimension_squares_sum_to_factorial() {
        for n in 1..=20u32 {
            let mut sum = BigInt::zero();
            for p in enumerate_partitions(n).unwrap() {
                let d = p.dimension();
                sum += &d * &d;
            }
            assert_eq!(sum, factorial(n as u64), "n = {n}");
        }
    }

    #[test]
    fn transpose_examples() {
        let p = Partition::new(vec![3]).unwrap();
        assert_eq!(p.transpose().parts(), &[1, 1, 1]);
        let q = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(q.transpose(), q);
    }

    #[test]
    fn balance_examples() {
        let p = Partition::new(vec![5; 5]).unwrap();
        assert!(p.is_balanced(3.0));
        assert!(!Partition::row(25).is_balanced(3.0));
        assert!(!Partition::column(25).is_balanced(3.0));
    }

    #[test]
    fn rsk_examples() {
        let id = Perm::identity(5);
        assert_eq!(rsk_shape(&id), Partition::row(5));
        let rev = Perm::new((0..5u32).rev().collect()).unwrap();
        assert_eq!(rsk_shape(&rev), Partition::column(5));
        // (3,1,2) one-based.
        let p = Perm::from_one_line("3,1,2").unwrap();
        assert_eq!(rsk_shape(&p).parts(), &[2, 1]);
        assert_eq!(lis_length(p.images()), 2);
        assert_eq!(lds_length(p.images()), 2);
    }

    #[test]
    fn rsk_first_row_is_lis_first_column_is_lds() {
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        for _ in 0..300 {
            let n = 1 + (rng.gen::<u32>() % 50) as usize;
            let p = Perm::random(n, &mut rng);
            let shape = rsk_shape(&p);
            assert_eq!(shape.first_part() as usize, lis_length(p.images()));
            assert_eq!(shape.rows(), lds_length(p.images()));
        }
    }

    #[test]
    fn plancherel_small_frequencies() {
        // n = 3: exact Plancherel is {[3]: 1/6, [2,1]: 2/3, [1,1,1]: 1/6}.
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let samples = 100_000;
        let mut counts = [0usize; 3];
        for _ in 0..samples {
            let shape = plancherel_sample(3, &mut rng).unwrap();
            match shape.rows() {
                1 => counts[0] += 1,
                2 => counts[1] += 1,
                _ => counts[2] += 1,
            }
        }
        let expect = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for (i, &c) in counts.iter().enumerate() {
            let p = expect[i];
            let sigma = (p * (1.0 - p) / samples as f64).sqrt();
            let freq = c as f64 / samples as f64;
            assert!(
                (freq - p).abs() < 3.0 * sigma,
                "class {i}: freq {freq} vs {p}"
            );
        }
    }

    #[test]
    fn plancherel_n4_31_frequency() {
        // d([3,1]) = 3, so P = 9/24.
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let samples = 100_000;
        let target = Partition::new(vec![3, 1]).unwrap();
        let mut hits = 0usize;
        for _ in 0..samples {
            if plancherel_sample(4, &mut rng).unwrap() == target {
                hits += 1;
            }
        }
        let p = 9.0 / 24.0;
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        assert!(((hits as f64 / samples as f64) - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn ln_dimension_matches_exact() {
        for n in [5u32, 12, 20] {
            for p in enumerate_partitions(n).unwrap().into_iter().take(20) {
                let exact = crate::scalar::ln_bigint(&p.dimension().max(BigInt::one()));
                let ln = p.ln_dimension();
                assert!((exact - ln).abs() < 1e-9 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn increasing_subsequence_expected_count_bound() {
        // Expected-count bound C(n,w)/w! < (e^2 n / w^2)^w for w = ceil(D sqrt(n)),
        // D = 3, n <= 10. Wide margins; float comparison is safe here.
        for n in 1..=10u64 {
            let w = (3.0 * (n as f64).sqrt()).ceil() as u64;
            let lhs = if w > n {
                0.0
            } else {
                let mut binom = 1.0f64;
                for i in 0..w {
                    binom *= (n - i) as f64 / (i + 1) as f64;
                }
                let mut wf = 1.0f64;
                for i in 1..=w {
                    wf *= i as f64;
                }
                binom / wf
            };
            let rhs = ((std::f64::consts::E.powi(2) * n as f64) / (w * w) as f64).powi(w as i32);
            assert!(lhs < rhs, "n={n} w={w} lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn partition_counts_known_values() {
        let counts = partition_counts(100);
        assert_eq!(counts[10].to_u64(), Some(42));
        assert_eq!(counts[100].to_u64(), Some(190_569_292));
    }
}
