//! Permutations of `{1..n}` with cycle statistics.
//!
//! Internally zero-based; the external one-line form is one-based
//! (`"2,1,3"` is the transposition (1 2) in `S_3`).

use crate::partition::Partition;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// A permutation stored as its image array: `images[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    /// Build from a zero-based image array, checking bijectivity.
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::invalid("image array is not a bijection"));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Uniform random permutation.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.shuffle(rng);
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm {
            images: (0..self.n())
                .map(|i| self.images[other.images[i] as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// Cycle type as a partition of `n` (fixed points included).
    pub fn cycle_type(&self) -> Partition {
        let mut seen = vec![false; self.n()];
        let mut parts = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).expect("cycle lengths form a partition")
    }

    /// One-based one-line serialization, e.g. "2,1,3".
    pub fn to_one_line(&self) -> String {
        self.images
            .iter()
            .map(|&v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the one-based one-line form.
    pub fn from_one_line(s: &str) -> Result<Self> {
        let images: Vec<u32> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad permutation entry {t:?}")))
            })
            .collect::<Result<_>>()?;
        if images.iter().any(|&v| v == 0) {
            return Err(Error::invalid("permutation entries are one-based"));
        }
        Perm::new(images.iter().map(|&v| v - 1).collect())
    }
}

/// Statistics attached to a permutation: `t` is the minimal number of
/// transpositions whose product is the permutation, `c` the number of
/// nontrivial cycles, `s` the support size. They satisfy `t = s - c` and
/// `t = n - (total number of cycles)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranspositionStats {
    pub t: usize,
    pub c: usize,
    pub s: usize,
}

impl TranspositionStats {
    pub fn of(p: &Perm) -> Self {
        Self::of_cycle_type(&p.cycle_type())
    }

    pub fn of_cycle_type(ct: &Partition) -> Self {
        let n = ct.n() as usize;
        let total_cycles = ct.parts().len();
        let c = ct.parts().iter().filter(|&&k| k > 1).count();
        let s = ct.parts().iter().filter(|&&k| k > 1).map(|&k| k as usize).sum();
        TranspositionStats {
            t: n - total_cycles,
            c,
            s,
        }
    }
}

/// Minimal transposition count `t(π)`.
pub fn transposition_distance(p: &Perm) -> usize {
    TranspositionStats::of(p).t
}

/// Length of the longest strictly increasing subsequence (patience sorting).
pub fn lis_length(seq: &[u32]) -> usize {
    let mut tops: Vec<u32> = Vec::new();
    for &x in seq {
        match tops.binary_search(&x) {
            Ok(_) => unreachable!("permutation entries are distinct"),
            Err(pos) => {
                if pos == tops.len() {
                    tops.push(x);
                } else {
                    tops[pos] = x;
                }
            }
        }
    }
    tops.len()
}

/// Length of the longest strictly decreasing subsequence.
pub fn lds_length(seq: &[u32]) -> usize {
    let reversed: Vec<u32> = seq.iter().rev().copied().collect();
    lis_length(&reversed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashSet, VecDeque};

    fn perm(v: &[u32]) -> Perm {
        Perm::new(v.iter().map(|&x| x - 1).collect()).unwrap()
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::new(vec![0, 0, 2]).is_err());
        assert!(Perm::new(vec![0, 3]).is_err());
    }

    #[test]
    fn cycle_type_sums_to_n() {
        let p = perm(&[2, 1, 4, 3, 5]);
        assert_eq!(p.cycle_type().parts(), &[2, 2, 1]);
        assert_eq!(p.cycle_type().n(), 5);
    }

    #[test]
    fn one_line_round_trip() {
        let p = perm(&[2, 1, 3]);
        assert_eq!(p.to_one_line(), "2,1,3");
        assert_eq!(Perm::from_one_line("2,1,3").unwrap(), p);
        assert!(Perm::from_one_line("0,1").is_err());
    }

    #[test]
    fn stats_identity_and_cycles() {
        assert_eq!(transposition_distance(&Perm::identity(6)), 0);
        // A single k-cycle has t = k-1.
        for k in 2..=7 {
            let mut v: Vec<u32> = (1..=k as u32).collect();
            v.rotate_left(1);
            let p = Perm::new(v.iter().map(|&x| x - 1).collect()).unwrap();
            assert_eq!(transposition_distance(&p), k - 1);
        }
        // (12)(34) in S_4.
        let p = perm(&[2, 1, 4, 3]);
        let st = TranspositionStats::of(&p);
        assert_eq!(st.t, 2);
        assert_eq!(st.c, 2);
        assert_eq!(st.s, 4);
        assert_eq!(st.t, st.s - st.c);
    }

    /// BFS distance in the transposition Cayley graph; the independent
    /// ground truth for the cycle-count formula.
    fn bfs_transposition_distance(target: &Perm) -> usize {
        let n = target.n();
        let id = Perm::identity(n);
        if *target == id {
            return 0;
        }
        let mut dist = std::collections::HashMap::new();
        dist.insert(id.clone(), 0usize);
        let mut queue = VecDeque::new();
        queue.push_back(id);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut im = p.images().to_vec();
                    im.swap(i, j);
                    let q = Perm::new(im).unwrap();
                    if q == *target {
                        return d + 1;
                    }
                    if !dist.contains_key(&q) {
                        dist.insert(q.clone(), d + 1);
                        queue.push_back(q);
                    }
                }
            }
        }
        unreachable!("transpositions generate S_n");
    }

    #[test]
    fn formula_matches_bfs_up_to_n5() {
        for n in 1..=5usize {
            for p in enumerate_all(n) {
                assert_eq!(transposition_distance(&p), bfs_transposition_distance(&p));
            }
        }
    }

    fn enumerate_all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut v: Vec<u32> = (0..n as u32).collect();
        permute(&mut v, 0, &mut out);
        out
    }

    fn permute(v: &mut Vec<u32>, k: usize, out: &mut Vec<Perm>) {
        if k == v.len() {
            out.push(Perm::new(v.clone()).unwrap());
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, out);
            v.swap(k, i);
        }
    }

    #[test]
    fn lis_lds_basic() {
        assert_eq!(lis_length(&[2, 0, 1]), 2);
        assert_eq!(lds_length(&[2, 0, 1]), 2);
        assert_eq!(lis_length(&[0, 1, 2, 3]), 4);
        assert_eq!(lds_length(&[0, 1, 2, 3]), 1);
    }

    #[test]
    fn random_perm_is_bijection() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let p = Perm::random(40, &mut rng);
        let set: HashSet<_> = p.images().iter().collect();
        assert_eq!(set.len(), 40);
    }
}
