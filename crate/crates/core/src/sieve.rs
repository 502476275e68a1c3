//! The combine-and-measure sieve: exact transcript probabilities, audits,
//! and Monte-Carlo simulation in the trivial-subgroup case.
//!
//! For a labeled forest `T` the probability of observing its labels is an
//! assignment sum: group elements `a_i` are attached to the nodes, and only
//! assignments whose root-to-leaf products all land in the allowed set
//! (`{1}` in the trivial case, `{1, m}` for `H = {1, m}`) contribute
//! `∏_i d_i χ_i(a_i)` to `|G|^k · P`.
//!
//! The evaluator here runs a prefix-product dynamic program over each tree:
//! `F_i(p)` sums the subtree's weights subject to every leaf product below
//! `i` completing the prefix `p` into the allowed set. Leaves cost `|G|`
//! and internal nodes `|G|²`, instead of the `|G|^k` of the literal sum;
//! the literal sum is retained (size-guarded) as an independent test oracle.
//! Terms with `χ_i(a) = 0` are skipped, which is exactly the non-flip
//! restriction when every label is inhomogeneous.

use crate::character::CharacterTable;
use crate::dist::Distribution;
use crate::forest::{enumerate_all_forests, Forest};
use crate::group::{ConcreteGroup, IrrepKind};
use crate::partition::{enumerate_partitions, Partition};
use crate::rng::derive_run_rng;
use crate::scalar::Rat;
use crate::stats::{wilson_interval, WilsonInterval};
use crate::wreath::Sign;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::RwLock;

/// Which hidden subgroup the transcript probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupCase {
    /// `H = {1}`: leaf products must be the identity.
    Trivial,
    /// `H = {1, m}` for an involution `m`: leaf products land in `{1, m}`.
    Involution(usize),
}

// ---------------------------------------------------------------------------
// Exact and floating-point evaluators
// ---------------------------------------------------------------------------

trait DpScalar: Clone + Copy + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn mul(self, other: Self) -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, v: i64) -> Self;
    fn is_exactly_zero(&self) -> bool;
}

impl DpScalar for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, v: i64) -> Self {
        self * v as i128
    }
    fn is_exactly_zero(&self) -> bool {
        *self == 0
    }
}

impl DpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, v: i64) -> Self {
        self * v as f64
    }
    fn is_exactly_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Per-node character tables plus dimensions, ready for the DP.
struct DpContext<S> {
    node_chars: Vec<Vec<S>>,
    dims: Vec<i64>,
}

fn dp_context_i128(
    group: &ConcreteGroup,
    labels: &[usize],
) -> Result<DpContext<i128>> {
    let mut node_chars = Vec::with_capacity(labels.len());
    let mut dims = Vec::with_capacity(labels.len());
    let mut cache: HashMap<usize, Vec<i128>> = HashMap::new();
    for &label in labels {
        if !cache.contains_key(&label) {
            let v = group.char_vector_i64(label)?;
            cache.insert(label, v.into_iter().map(|x| x as i128).collect());
        }
        node_chars.push(cache[&label].clone());
        dims.push(group.irreps()[label].dim as i64);
    }
    Ok(DpContext { node_chars, dims })
}

fn dp_context_f64(group: &ConcreteGroup, labels: &[usize]) -> Result<DpContext<f64>> {
    let mut node_chars = Vec::with_capacity(labels.len());
    let mut dims = Vec::with_capacity(labels.len());
    let mut cache: HashMap<usize, Vec<f64>> = HashMap::new();
    for &label in labels {
        if !cache.contains_key(&label) {
            cache.insert(label, group.char_vector_f64(label)?);
        }
        node_chars.push(cache[&label].clone());
        dims.push(group.irreps()[label].dim as i64);
    }
    Ok(DpContext { node_chars, dims })
}

/// `|G|^k · P`: the assignment-sum weight of the labeled forest.
fn forest_weight<S: DpScalar>(
    group: &ConcreteGroup,
    forest: &Forest,
    ctx: &DpContext<S>,
    case: SubgroupCase,
) -> S {
    let order = group.order();
    let targets: Vec<usize> = match case {
        SubgroupCase::Trivial => vec![group.identity()],
        SubgroupCase::Involution(m) => vec![group.identity(), m],
    };
    // F tables bottom-up; children precede parents by construction.
    let mut tables: Vec<Vec<S>> = Vec::with_capacity(forest.k());
    for (id, node) in forest.nodes().iter().enumerate() {
        let chars = &ctx.node_chars[id];
        let d = ctx.dims[id];
        let mut table = vec![S::zero(); order];
        match node.children {
            None => {
                for (p, slot) in table.iter_mut().enumerate() {
                    let p_inv = group.inv(p);
                    let mut acc = S::zero();
                    for &t in &targets {
                        acc = acc.add(chars[group.mul(p_inv, t)]);
                    }
                    *slot = acc.scale(d);
                }
            }
            Some((u, v)) => {
                let (fu, fv) = (&tables[u], &tables[v]);
                for (p, slot) in table.iter_mut().enumerate() {
                    let mut acc = S::zero();
                    for a in 0..order {
                        let chi = chars[a];
                        if chi.is_exactly_zero() {
                            continue;
                        }
                        let pa = group.mul(p, a);
                        acc = acc.add(chi.mul(fu[pa].mul(fv[pa])));
                    }
                    *slot = acc.scale(d);
                }
            }
        }
        tables.push(table);
    }
    let mut total = S::from_i64(1);
    for r in forest.roots() {
        total = total.mul(tables[r][group.identity()]);
    }
    total
}

fn check_case(group: &ConcreteGroup, case: SubgroupCase) -> Result<()> {
    if let SubgroupCase::Involution(m) = case {
        if !group.is_involution(m) {
            return Err(Error::NotAnInvolution);
        }
    }
    Ok(())
}

/// Exact probability of observing `labels` on `forest`, trivial case.
pub fn exact_transcript_prob_trivial(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
) -> Result<Rat> {
    exact_transcript_prob(group, forest, labels, SubgroupCase::Trivial)
}

/// Exact probability of observing `labels` on `forest` under `H = {1, m}`.
pub fn exact_transcript_prob_involution(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    m: usize,
) -> Result<Rat> {
    exact_transcript_prob(group, forest, labels, SubgroupCase::Involution(m))
}

/// Exact transcript probability for groups with integer characters.
pub fn exact_transcript_prob(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    case: SubgroupCase,
) -> Result<Rat> {
    if labels.len() != forest.k() {
        return Err(Error::mismatch("one label per node required"));
    }
    check_case(group, case)?;
    if !group.exact_characters() {
        return Err(Error::invalid(
            "group characters are irrational; use transcript_prob_f64",
        ));
    }
    let ctx = dp_context_i128(group, labels)?;
    let weight = forest_weight(group, forest, &ctx, case);
    let denom = BigInt::from(group.order()).pow(forest.k() as u32);
    Ok(Rat::new(BigInt::from(weight), denom))
}

/// Transcript probability in floating point (for irrational characters).
pub fn transcript_prob_f64(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    case: SubgroupCase,
) -> Result<f64> {
    if labels.len() != forest.k() {
        return Err(Error::mismatch("one label per node required"));
    }
    check_case(group, case)?;
    let ctx = dp_context_f64(group, labels)?;
    let weight = forest_weight(group, forest, &ctx, case);
    Ok(weight / (group.order() as f64).powi(forest.k() as i32))
}

/// The contribution of the all-identity assignment: `∏_i d_i² / |G|^k`.
pub fn identity_assignment_term(group: &ConcreteGroup, labels: &[usize]) -> Rat {
    let mut num = BigInt::one();
    for &l in labels {
        let d = BigInt::from(group.irreps()[l].dim);
        num *= &d * &d;
    }
    Rat::new(num, BigInt::from(group.order()).pow(labels.len() as u32))
}

/// Literal assignment-sum evaluation: enumerate all `|G|^k` assignments,
/// keep the trivial/legal ones, sum `∏ d_i χ_i(a_i)`. Exponential; guarded.
/// This is the independent oracle for the DP evaluator.
pub fn assignment_sum_bruteforce(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    case: SubgroupCase,
) -> Result<Rat> {
    check_case(group, case)?;
    let order = group.order();
    let k = forest.k();
    let total = (order as u128).checked_pow(k as u32);
    match total {
        Some(t) if t <= 4_000_000 => {}
        _ => return Err(Error::capability("brute-force assignment sum too large")),
    }
    let chars: Vec<Vec<i64>> = labels
        .iter()
        .map(|&l| group.char_vector_i64(l))
        .collect::<Result<_>>()?;
    let dims: Vec<i64> = labels.iter().map(|&l| group.irreps()[l].dim as i64).collect();
    // Root-to-leaf chains per register: nodes containing the register,
    // outermost (largest leafset) first.
    let mut chains: Vec<Vec<usize>> = vec![Vec::new(); forest.leaves()];
    for (id, node) in forest.nodes().iter().enumerate() {
        for &r in &node.leafset {
            chains[r].push(id);
        }
    }
    for chain in &mut chains {
        chain.sort_by_key(|&id| std::cmp::Reverse(forest.nodes()[id].leafset.len()));
    }
    let targets: Vec<usize> = match case {
        SubgroupCase::Trivial => vec![group.identity()],
        SubgroupCase::Involution(m) => vec![group.identity(), m],
    };
    let mut assignment = vec![0usize; k];
    let mut sum: i128 = 0;
    loop {
        let legal = chains.iter().all(|chain| {
            let mut prod = group.identity();
            for &node in chain {
                prod = group.mul(prod, assignment[node]);
            }
            targets.contains(&prod)
        });
        if legal {
            let mut term: i128 = 1;
            for (node, &a) in assignment.iter().enumerate() {
                term *= (dims[node] * chars[node][a]) as i128;
            }
            sum += term;
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == k {
                let denom = BigInt::from(order).pow(k as u32);
                return Ok(Rat::new(BigInt::from(sum), denom));
            }
            assignment[pos] += 1;
            if assignment[pos] < order {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Equality audit and the distinguishing bound
// ---------------------------------------------------------------------------

fn is_hom_label(group: &ConcreteGroup, label: usize) -> bool {
    matches!(group.irreps()[label].kind, IrrepKind::WreathHom(..))
}

/// All `r^k` labelings of a `k`-node forest, in odometer order.
fn all_labelings(r: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (r as u64).pow(k as u32);
    (0..total).map(move |mut x| {
        let mut v = Vec::with_capacity(k);
        for _ in 0..k {
            v.push((x % r as u64) as usize);
            x /= r as u64;
        }
        v
    })
}

/// Outcome of the inhomogeneity equality audit over all topologies with at
/// most `max_k` nodes.
#[derive(Debug, Clone)]
pub struct EqualityAudit {
    pub group: String,
    pub max_k: usize,
    pub topologies: usize,
    pub labelings: u64,
    pub all_inhom_labelings: u64,
    /// All-inhomogeneous labelings with `P^H ≠ P^{1}`; must be zero.
    pub violations: u64,
    /// Labelings where the probabilities differ (they all contain a
    /// homogeneous label when `violations == 0`).
    pub differing_labelings: u64,
    pub differing_with_hom: u64,
}

/// Check `P^H = P^{1}` exactly on every all-inhomogeneous labeling of every
/// topology with at most `max_k` nodes, and that the per-topology label
/// distributions are complete.
pub fn inhomogeneity_equality_audit(
    group: &ConcreteGroup,
    m: usize,
    max_k: usize,
) -> Result<EqualityAudit> {
    if group.wreath_base().is_none() {
        return Err(Error::invalid("equality audit expects a wreath group"));
    }
    let r = group.irreps().len();
    let mut audit = EqualityAudit {
        group: group.descriptor().to_string(),
        max_k,
        topologies: 0,
        labelings: 0,
        all_inhom_labelings: 0,
        violations: 0,
        differing_labelings: 0,
        differing_with_hom: 0,
    };
    for forest in enumerate_all_forests(max_k, max_k) {
        audit.topologies += 1;
        let labelings: Vec<Vec<usize>> = all_labelings(r, forest.k()).collect();
        let results: Vec<(Rat, Rat, bool)> = labelings
            .par_iter()
            .map(|labels| {
                let p1 = exact_transcript_prob_trivial(group, &forest, labels).unwrap();
                let ph = exact_transcript_prob_involution(group, &forest, labels, m).unwrap();
                let has_hom = labels.iter().any(|&l| is_hom_label(group, l));
                (p1, ph, has_hom)
            })
            .collect();
        let mut sum1 = Rat::zero();
        let mut sumh = Rat::zero();
        for (p1, ph, has_hom) in &results {
            audit.labelings += 1;
            if !has_hom {
                audit.all_inhom_labelings += 1;
                if p1 != ph {
                    audit.violations += 1;
                }
            }
            if p1 != ph {
                audit.differing_labelings += 1;
                if *has_hom {
                    audit.differing_with_hom += 1;
                }
            }
            sum1 += p1;
            sumh += ph;
        }
        if sum1 != Rat::one() || sumh != Rat::one() {
            return Err(Error::invalid(format!(
                "label distribution incomplete on a {}-node topology: {} / {}",
                forest.k(),
                sum1,
                sumh
            )));
        }
    }
    Ok(audit)
}

/// Exact distinguishing data for one topology.
#[derive(Debug, Clone)]
pub struct TopologyBound {
    pub leaves: usize,
    pub k: usize,
    /// `(1/2) Σ_labelings |P^H - P^{1}|`.
    pub tvd: Rat,
    /// `Σ P^{1}` over labelings containing a homogeneous label.
    pub hom_mass_trivial: Rat,
    /// TVD restricted to all-inhomogeneous labelings (always zero).
    pub tvd_inhomogeneous: Rat,
}

/// Exact TVD between the transcript distributions of the two cases per
/// topology, with the homogeneous-mass bound `TVD ≤ Pr[hom | trivial]`.
pub fn distinguishing_bound(
    group: &ConcreteGroup,
    m: usize,
    max_k: usize,
) -> Result<Vec<TopologyBound>> {
    if group.wreath_base().is_none() {
        return Err(Error::invalid("distinguishing bound expects a wreath group"));
    }
    let r = group.irreps().len();
    let two = Rat::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    for forest in enumerate_all_forests(max_k, max_k) {
        let labelings: Vec<Vec<usize>> = all_labelings(r, forest.k()).collect();
        let results: Vec<(Rat, Rat, bool)> = labelings
            .par_iter()
            .map(|labels| {
                let p1 = exact_transcript_prob_trivial(group, &forest, labels).unwrap();
                let ph = exact_transcript_prob_involution(group, &forest, labels, m).unwrap();
                let has_hom = labels.iter().any(|&l| is_hom_label(group, l));
                (p1, ph, has_hom)
            })
            .collect();
        let mut abs_sum = Rat::zero();
        let mut inhom_abs_sum = Rat::zero();
        let mut hom_mass = Rat::zero();
        for (p1, ph, has_hom) in &results {
            let diff = (ph - p1).abs();
            abs_sum += &diff;
            if *has_hom {
                hom_mass += p1;
            } else {
                inhom_abs_sum += &diff;
            }
        }
        let bound = TopologyBound {
            leaves: forest.leaves(),
            k: forest.k(),
            tvd: abs_sum / &two,
            hom_mass_trivial: hom_mass,
            tvd_inhomogeneous: inhom_abs_sum / &two,
        };
        assert!(
            bound.tvd <= bound.hom_mass_trivial,
            "TVD must be bounded by the homogeneous mass"
        );
        out.push(bound);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Simulation: strategies and label chains
// ---------------------------------------------------------------------------

/// Adaptive pair-selection rule for the combine-and-measure loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Uniformly random pair of current roots.
    RandomPair,
    /// The two roots with the smallest label dimensions (ties by node id).
    GreedyLowestDimension,
    /// Non-adaptive tournament: always the two oldest roots.
    PairAdjacent,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Strategy> {
        match s {
            "random-pair" => Ok(Strategy::RandomPair),
            "greedy-lowest-dimension" => Ok(Strategy::GreedyLowestDimension),
            "pair-adjacent" => Ok(Strategy::PairAdjacent),
            _ => Err(Error::invalid(format!("unknown strategy {s:?}"))),
        }
    }

    fn select<R: Rng>(&self, roots: &[usize], dims: &[f64], rng: &mut R) -> (usize, usize) {
        debug_assert!(roots.len() >= 2);
        match self {
            Strategy::RandomPair => {
                let i = rng.gen_range(0..roots.len());
                let mut j = rng.gen_range(0..roots.len() - 1);
                if j >= i {
                    j += 1;
                }
                (roots[i.min(j)], roots[i.max(j)])
            }
            Strategy::GreedyLowestDimension => {
                let mut order: Vec<usize> = (0..roots.len()).collect();
                order.sort_by(|&a, &b| {
                    dims[a]
                        .partial_cmp(&dims[b])
                        .unwrap()
                        .then(roots[a].cmp(&roots[b]))
                });
                (roots[order[0]], roots[order[1]])
            }
            Strategy::PairAdjacent => (roots[0], roots[1]),
        }
    }
}

/// A label chain: how leaves are sampled and how two labels combine.
/// The trivial case makes every intermediate state completely mixed in its
/// isotypic image, so labels form a Markov chain along the forest.
pub trait SieveChain {
    type Label: Clone + Eq + std::fmt::Debug;
    fn sample_leaf<R: Rng>(&self, rng: &mut R) -> Self::Label;
    fn combine<R: Rng>(&self, a: &Self::Label, b: &Self::Label, rng: &mut R) -> Self::Label;
    fn dim_hint(&self, label: &Self::Label) -> f64;
    fn label_name(&self, label: &Self::Label) -> String;
}

/// Run the sieve in the trivial case: `leaves` weak-Fourier samples, then
/// combine-and-measure under `strategy` until one root remains.
pub fn simulate_trivial<C: SieveChain, R: Rng>(
    chain: &C,
    leaves: usize,
    strategy: Strategy,
    rng: &mut R,
) -> (Forest, Vec<C::Label>) {
    assert!(leaves >= 1);
    let mut forest = Forest::singletons(leaves);
    let mut labels: Vec<C::Label> = (0..leaves).map(|_| chain.sample_leaf(rng)).collect();
    loop {
        let roots = forest.roots();
        if roots.len() < 2 {
            break;
        }
        let dims: Vec<f64> = roots.iter().map(|&r| chain.dim_hint(&labels[r])).collect();
        let (a, b) = strategy.select(&roots, &dims, rng);
        let label = chain.combine(&labels[a], &labels[b], rng);
        forest.combine(a, b).expect("selected roots are valid");
        labels.push(label);
    }
    (forest, labels)
}

fn sample_index<R: Rng>(cumulative: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    match cumulative.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
        Ok(i) => i + 1,
        Err(i) => i,
    }
    .min(cumulative.len() - 1)
}

fn cumulative(dist: &Distribution<usize>, count: usize) -> Vec<f64> {
    let mut cum = vec![0.0; count];
    let mut acc = 0.0;
    for (k, p) in dist.entries() {
        acc += p.to_f64().unwrap();
        cum[*k] = acc;
    }
    // Entries are in key order 0..count for the model distributions.
    for i in 1..count {
        if cum[i] < cum[i - 1] {
            cum[i] = cum[i - 1];
        }
    }
    cum
}

/// Sieve chain over any concrete group with per-element characters: leaf
/// labels are Plancherel, internal labels follow the natural distribution of
/// their parents. Distributions are exact; sampling uses cached cumulative
/// tables.
pub struct TableModel<'g> {
    group: &'g ConcreteGroup,
    plancherel: Distribution<usize>,
    naturals: Vec<Vec<Distribution<usize>>>,
    plancherel_cum: Vec<f64>,
    naturals_cum: Vec<Vec<Vec<f64>>>,
}

impl<'g> TableModel<'g> {
    pub fn new(group: &'g ConcreteGroup) -> Result<Self> {
        let order = group.order();
        let r = group.irreps().len();
        let order_big = BigInt::from(order);
        let planch_entries: Vec<(usize, Rat)> = group
            .irreps()
            .iter()
            .enumerate()
            .map(|(i, info)| {
                let d = BigInt::from(info.dim);
                (i, Rat::new(&d * &d, order_big.clone()))
            })
            .collect();
        let plancherel = Distribution::new(planch_entries)?;
        // Tensor multiplicities by element-wise triple sums; exact integers
        // even when the characters are irrational.
        let vectors: Vec<Vec<f64>> = (0..r).map(|i| group.char_vector_f64(i)).collect::<Result<_>>()?;
        let mut naturals: Vec<Vec<Distribution<usize>>> = Vec::with_capacity(r);
        for a in 0..r {
            let mut row = Vec::with_capacity(r);
            for b in 0..r {
                let denom =
                    BigInt::from(group.irreps()[a].dim) * BigInt::from(group.irreps()[b].dim);
                let entries: Vec<(usize, Rat)> = (0..r)
                    .map(|t| {
                        let dot: f64 = (0..order)
                            .map(|x| vectors[t][x] * vectors[a][x] * vectors[b][x])
                            .sum();
                        let mult = (dot / order as f64).round();
                        assert!(
                            (dot / order as f64 - mult).abs() < 1e-6,
                            "tensor multiplicity must be an integer"
                        );
                        assert!(mult >= 0.0);
                        let p = Rat::new(
                            BigInt::from(group.irreps()[t].dim) * BigInt::from(mult as i64),
                            denom.clone(),
                        );
                        (t, p)
                    })
                    .collect();
                row.push(Distribution::new(entries)?);
            }
            naturals.push(row);
        }
        let plancherel_cum = cumulative(&plancherel, r);
        let naturals_cum = naturals
            .iter()
            .map(|row| row.iter().map(|d| cumulative(d, r)).collect())
            .collect();
        Ok(TableModel {
            group,
            plancherel,
            naturals,
            plancherel_cum,
            naturals_cum,
        })
    }

    pub fn plancherel(&self) -> &Distribution<usize> {
        &self.plancherel
    }

    pub fn natural(&self, a: usize, b: usize) -> &Distribution<usize> {
        &self.naturals[a][b]
    }

    pub fn group(&self) -> &ConcreteGroup {
        self.group
    }
}

impl SieveChain for TableModel<'_> {
    type Label = usize;

    fn sample_leaf<R: Rng>(&self, rng: &mut R) -> usize {
        sample_index(&self.plancherel_cum, rng)
    }

    fn combine<R: Rng>(&self, a: &usize, b: &usize, rng: &mut R) -> usize {
        sample_index(&self.naturals_cum[*a][*b], rng)
    }

    fn dim_hint(&self, label: &usize) -> f64 {
        self.group.irreps()[*label].dim as f64
    }

    fn label_name(&self, label: &usize) -> String {
        self.group.irreps()[*label].name.clone()
    }
}

// ---------------------------------------------------------------------------
// Wreath pair chain (S_n base), exact sampling through base distributions
// ---------------------------------------------------------------------------

/// A wreath irrep tracked as a pair of base irrep indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairLabel {
    /// Unordered pair `i < j`.
    Inhom(usize, usize),
    Hom(usize, Sign),
}

impl PairLabel {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, PairLabel::Hom(..))
    }

    fn of(a: usize, b: usize, sign: Sign) -> PairLabel {
        if a == b {
            PairLabel::Hom(a, sign)
        } else {
            PairLabel::Inhom(a.min(b), a.max(b))
        }
    }
}

/// Access to base-group natural distributions for the wreath chain.
/// Implementations may compute rows lazily.
pub trait BaseSampler: Sync {
    fn irrep_count(&self) -> usize;
    fn sample_plancherel<R: Rng>(&self, rng: &mut R) -> usize;
    fn sample_natural<R: Rng>(&self, a: usize, b: usize, rng: &mut R) -> usize;
    /// Tensor multiplicity `M(t; a, b)`, needed for the sign weights of
    /// homogeneous ⊗ homogeneous combinations.
    fn multiplicity(&self, t: usize, a: usize, b: usize) -> i64;
    fn partition_name(&self, idx: usize) -> String;
}

/// Exact-table base sampler for `n ≤ 14`.
pub struct SmallBase<'t> {
    table: &'t CharacterTable,
    plancherel_cum: Vec<f64>,
    naturals_cum: RwLock<HashMap<(usize, usize), Vec<f64>>>,
}

impl<'t> SmallBase<'t> {
    pub fn new(table: &'t CharacterTable) -> Self {
        let n = table.n();
        let nf = crate::scalar::factorial(n as u64).to_f64().unwrap();
        let mut cum = Vec::with_capacity(table.irreps().len());
        let mut acc = 0.0;
        for r in 0..table.irreps().len() {
            let d = table.dimension(r) as f64;
            acc += d * d / nf;
            cum.push(acc);
        }
        SmallBase {
            table,
            plancherel_cum: cum,
            naturals_cum: RwLock::new(HashMap::new()),
        }
    }

    fn natural_cum(&self, a: usize, b: usize) -> Vec<f64> {
        if let Some(c) = self.naturals_cum.read().unwrap().get(&(a, b)) {
            return c.clone();
        }
        let r = self.table.irreps().len();
        let denom = (self.table.dimension(a) * self.table.dimension(b)) as f64;
        let mut acc = 0.0;
        let mut cum = Vec::with_capacity(r);
        for t in 0..r {
            let mult = self.table.cg_multiplicity_by_index(t, a, b) as f64;
            acc += self.table.dimension(t) as f64 * mult / denom;
            cum.push(acc);
        }
        self.naturals_cum.write().unwrap().insert((a, b), cum.clone());
        cum
    }
}

impl BaseSampler for SmallBase<'_> {
    fn irrep_count(&self) -> usize {
        self.table.irreps().len()
    }

    fn sample_plancherel<R: Rng>(&self, rng: &mut R) -> usize {
        sample_cum(&self.plancherel_cum, rng)
    }

    fn sample_natural<R: Rng>(&self, a: usize, b: usize, rng: &mut R) -> usize {
        sample_cum(&self.natural_cum(a, b), rng)
    }

    fn multiplicity(&self, t: usize, a: usize, b: usize) -> i64 {
        self.table.cg_multiplicity_by_index(t, a, b) as i64
    }

    fn partition_name(&self, idx: usize) -> String {
        self.table.irreps()[idx].to_compact_string()
    }
}

fn sample_cum<R: Rng>(cum: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    match cum.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
        Ok(i) => i + 1,
        Err(i) => i,
    }
    .min(cum.len() - 1)
}

/// Large-`n` base sampler (`14 < n ≤ 40`): dimensions from hook lengths,
/// Plancherel through RSK, and natural-distribution rows computed lazily
/// from Murnaghan-Nakayama class sums the first time a pair is combined.
/// Row construction is quadratic in the partition count; practical for
/// moderate `n`, increasingly expensive toward the upper bound.
pub struct LargeBase {
    n: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    dims: Vec<BigInt>,
    class_sizes: Vec<BigInt>,
    naturals: RwLock<HashMap<(usize, usize), (Vec<f64>, Vec<i64>)>>,
}

impl LargeBase {
    pub fn new(n: u32) -> Result<Self> {
        if n > 40 {
            return Err(Error::capability(format!(
                "large-base sampling supports n <= 40, got {n}"
            )));
        }
        let partitions = enumerate_partitions(n)?;
        let index: HashMap<Partition, usize> = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let dims: Vec<BigInt> = partitions.iter().map(|p| p.dimension()).collect();
        let class_sizes: Vec<BigInt> = partitions
            .iter()
            .map(crate::character::class_size)
            .collect();
        Ok(LargeBase {
            n,
            partitions,
            index,
            dims,
            class_sizes,
            naturals: RwLock::new(HashMap::new()),
        })
    }

    fn natural_row(&self, a: usize, b: usize) -> (Vec<f64>, Vec<i64>) {
        if let Some(row) = self.naturals.read().unwrap().get(&(a, b)) {
            return row.clone();
        }
        let nf = crate::scalar::factorial(self.n as u64);
        let r = self.partitions.len();
        // χ_a χ_b per class once, then per-candidate class sums.
        let mut memo = HashMap::new();
        let chi_ab: Vec<BigInt> = self
            .partitions
            .iter()
            .map(|ct| {
                let xa = crate::character::mn_character_with_order(
                    &self.partitions[a],
                    ct,
                    &mut memo,
                    true,
                );
                let xb = crate::character::mn_character_with_order(
                    &self.partitions[b],
                    ct,
                    &mut memo,
                    true,
                );
                BigInt::from(xa) * BigInt::from(xb)
            })
            .collect();
        let denom = (&self.dims[a] * &self.dims[b]).to_f64().unwrap();
        let mut mults = vec![0i64; r];
        let mut cum = vec![0.0f64; r];
        let mut acc = 0.0;
        let mut memo_t = HashMap::new();
        for t in 0..r {
            let mut num = BigInt::zero();
            for (c, ct) in self.partitions.iter().enumerate() {
                if chi_ab[c].is_zero() {
                    continue;
                }
                let xt = crate::character::mn_character_with_order(
                    &self.partitions[t],
                    ct,
                    &mut memo_t,
                    true,
                );
                num += &self.class_sizes[c] * &chi_ab[c] * BigInt::from(xt);
            }
            let (q, rem) = num::Integer::div_rem(&num, &nf);
            assert!(rem.is_zero(), "tensor multiplicity must be an integer");
            let m = q.to_i64().expect("multiplicity fits i64");
            assert!(m >= 0);
            mults[t] = m;
            acc += self.dims[t].to_f64().unwrap() * m as f64 / denom;
            cum[t] = acc;
        }
        let row = (cum, mults);
        self.naturals
            .write()
            .unwrap()
            .insert((a, b), row.clone());
        row
    }
}

impl BaseSampler for LargeBase {
    fn irrep_count(&self) -> usize {
        self.partitions.len()
    }

    fn sample_plancherel<R: Rng>(&self, rng: &mut R) -> usize {
        let shape = crate::partition::plancherel_sample(self.n, rng).unwrap();
        self.index[&shape]
    }

    fn sample_natural<R: Rng>(&self, a: usize, b: usize, rng: &mut R) -> usize {
        let (cum, _) = self.natural_row(a.min(b), a.max(b));
        sample_cum(&cum, rng)
    }

    fn multiplicity(&self, t: usize, a: usize, b: usize) -> i64 {
        let (_, mults) = self.natural_row(a.min(b), a.max(b));
        mults[t]
    }

    fn partition_name(&self, idx: usize) -> String {
        self.partitions[idx].to_compact_string()
    }
}

/// The wreath sieve chain over a base sampler: exact sampling of wreath
/// Plancherel leaves and wreath natural distributions, expressed through the
/// base factorizations (a uniformly chosen pairing of the factors, one base
/// natural draw per side, a sign correction for hom ⊗ hom).
pub struct WreathPairChain<'b, B: BaseSampler> {
    base: &'b B,
}

impl<'b, B: BaseSampler> WreathPairChain<'b, B> {
    pub fn new(base: &'b B) -> Self {
        WreathPairChain { base }
    }
}

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen::<bool>() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

impl<B: BaseSampler> SieveChain for WreathPairChain<'_, B> {
    type Label = PairLabel;

    fn sample_leaf<R: Rng>(&self, rng: &mut R) -> PairLabel {
        let a = self.base.sample_plancherel(rng);
        let b = self.base.sample_plancherel(rng);
        PairLabel::of(a, b, random_sign(rng))
    }

    fn combine<R: Rng>(&self, x: &PairLabel, y: &PairLabel, rng: &mut R) -> PairLabel {
        use PairLabel::{Hom, Inhom};
        match (*x, *y) {
            (Inhom(a1, a2), Inhom(b1, b2)) => {
                let ((p1, q1), (p2, q2)) = if rng.gen::<bool>() {
                    ((a1, b1), (a2, b2))
                } else {
                    ((a1, b2), (a2, b1))
                };
                let t1 = self.base.sample_natural(p1, q1, rng);
                let t2 = self.base.sample_natural(p2, q2, rng);
                PairLabel::of(t1, t2, random_sign(rng))
            }
            (Hom(v, _), Inhom(b1, b2)) | (Inhom(b1, b2), Hom(v, _)) => {
                let t1 = self.base.sample_natural(v, b1, rng);
                let t2 = self.base.sample_natural(v, b2, rng);
                PairLabel::of(t1, t2, random_sign(rng))
            }
            (Hom(v, sv), Hom(w, sw)) => {
                let t1 = self.base.sample_natural(v, w, rng);
                let t2 = self.base.sample_natural(v, w, rng);
                if t1 != t2 {
                    PairLabel::Inhom(t1.min(t2), t1.max(t2))
                } else {
                    // P(sign s) = (M + s·sv·sw) / (2M) with M the base
                    // multiplicity of t1 in v ⊗ w.
                    let m = self.base.multiplicity(t1, v, w);
                    debug_assert!(m >= 1);
                    let prod = sv.value() * sw.value();
                    let p_plus = (m + prod) as f64 / (2 * m) as f64;
                    let sign = if rng.gen::<f64>() < p_plus {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    PairLabel::Hom(t1, sign)
                }
            }
        }
    }

    fn dim_hint(&self, label: &PairLabel) -> f64 {
        // Relative ordering is all the greedy strategy needs.
        match label {
            PairLabel::Inhom(a, b) => 2.0 * (*a as f64 + 1.0) * (*b as f64 + 1.0),
            PairLabel::Hom(a, _) => (*a as f64 + 1.0).powi(2),
        }
    }

    fn label_name(&self, label: &PairLabel) -> String {
        match label {
            PairLabel::Inhom(a, b) => format!(
                "inhom:{}|{}",
                self.base.partition_name(*a),
                self.base.partition_name(*b)
            ),
            PairLabel::Hom(a, s) => format!(
                "hom:{}:{}",
                if *s == Sign::Plus { "+" } else { "-" },
                self.base.partition_name(*a)
            ),
        }
    }
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

/// Per-level observation counts from the homogeneous-hit experiment.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub nodes: u64,
    pub homogeneous: u64,
}

/// Monte-Carlo estimate of how often a homogeneous label shows up in the
/// trivial case, with the exact per-leaf probability for comparison.
#[derive(Debug, Clone)]
pub struct HitExperiment {
    pub n: u32,
    pub leaves: usize,
    pub runs: u64,
    /// Exact `Σ_λ (d_λ²/n!)²`: per-leaf homogeneous probability.
    pub per_leaf_hom_prob: Rat,
    pub leaf_hit_runs: u64,
    pub internal_hit_runs: u64,
    pub any_hit_runs: u64,
    pub frequency: f64,
    pub wilson: WilsonInterval,
    pub per_level: Vec<LevelStats>,
}

/// Run the experiment over `S_n ≀ Z₂`. Uses exact character tables for
/// `n ≤ 14` and lazy Murnaghan-Nakayama rows beyond.
pub fn homogeneous_hit_experiment(
    n: u32,
    leaves: usize,
    strategy: Strategy,
    runs: u64,
    seed: u64,
) -> Result<HitExperiment> {
    if n == 0 || leaves == 0 {
        return Err(Error::invalid("need n >= 1 and at least one leaf"));
    }
    if n > 40 {
        return Err(Error::capability(format!(
            "homogeneous_hit_experiment supports n <= 40, got {n}"
        )));
    }
    let per_leaf = crate::dist::plancherel_self_collision(n)?;
    let run_one = |chain: &dyn Fn(&mut rand_chacha::ChaCha12Rng) -> (Forest, Vec<PairLabel>),
                   idx: u64| {
        let mut rng = derive_run_rng(seed, "hit-experiment", idx);
        chain(&mut rng)
    };
    let results: Vec<(Forest, Vec<PairLabel>)> = if n <= 14 {
        let table = CharacterTable::new(n)?;
        let base = SmallBase::new(&table);
        let chain = WreathPairChain::new(&base);
        (0..runs)
            .into_par_iter()
            .map(|i| run_one(&|rng| simulate_trivial(&chain, leaves, strategy, rng), i))
            .collect()
    } else {
        let base = LargeBase::new(n)?;
        let chain = WreathPairChain::new(&base);
        (0..runs)
            .into_par_iter()
            .map(|i| run_one(&|rng| simulate_trivial(&chain, leaves, strategy, rng), i))
            .collect()
    };
    let mut leaf_hit_runs = 0;
    let mut internal_hit_runs = 0;
    let mut any_hit_runs = 0;
    let mut per_level: Vec<LevelStats> = Vec::new();
    for (forest, labels) in &results {
        let mut leaf_hit = false;
        let mut internal_hit = false;
        for (id, label) in labels.iter().enumerate() {
            let level = forest.level(id);
            while per_level.len() <= level {
                per_level.push(LevelStats {
                    level: per_level.len(),
                    nodes: 0,
                    homogeneous: 0,
                });
            }
            per_level[level].nodes += 1;
            if label.is_homogeneous() {
                per_level[level].homogeneous += 1;
                if forest.is_leaf(id) {
                    leaf_hit = true;
                } else {
                    internal_hit = true;
                }
            }
        }
        leaf_hit_runs += u64::from(leaf_hit);
        internal_hit_runs += u64::from(internal_hit);
        any_hit_runs += u64::from(leaf_hit || internal_hit);
    }
    let frequency = any_hit_runs as f64 / runs as f64;
    Ok(HitExperiment {
        n,
        leaves,
        runs,
        per_leaf_hom_prob: per_leaf,
        leaf_hit_runs,
        internal_hit_runs,
        any_hit_runs,
        frequency,
        wilson: wilson_interval(any_hit_runs, runs, 3.0),
        per_level,
    })
}

/// Dihedral positive control: the sign irrep is a missing harmonic for
/// `H = {1, reflection}`, so no transcript containing it carries any
/// probability, while the trivial case observes it at rate `1/(2n)` per leaf.
#[derive(Debug, Clone)]
pub struct DihedralDemo {
    pub n: u32,
    pub missing_harmonic: String,
    pub audited_topologies: usize,
    pub audited_labelings: u64,
    /// Largest `|P^H|` seen on a transcript containing the sign irrep.
    /// Exactly zero for integral character tables; `< 1e-9` otherwise.
    pub max_mass_on_harmonic: f64,
    pub exact_audit_passed: bool,
    pub leaf_prob_exact: Rat,
    pub mc_runs: u64,
    pub mc_leaf_draws: u64,
    pub mc_harmonic_leaves: u64,
    pub mc_leaf_frequency: f64,
    pub mc_within_3_sigma: bool,
    pub mc_observed_runs: u64,
}

pub fn dihedral_missing_harmonic_demo(n: u32, runs: u64, seed: u64) -> Result<DihedralDemo> {
    if !(2..=64).contains(&n) {
        return Err(Error::capability(format!(
            "dihedral demo supports 2 <= n <= 64, got {n}"
        )));
    }
    let group = crate::group::make_dihedral(n)?;
    let m = group.dihedral_reflection(0).unwrap();
    let sgn = group.irrep_index_by_name("sgn").unwrap();
    let exact = group.exact_characters();

    // Exact audit over k <= 4 for moderate n.
    let mut audited_topologies = 0;
    let mut audited_labelings = 0u64;
    let mut max_mass: f64 = 0.0;
    if n <= 8 {
        let r = group.irreps().len();
        for forest in enumerate_all_forests(4, 4) {
            audited_topologies += 1;
            for labels in all_labelings(r, forest.k()) {
                if !labels.contains(&sgn) {
                    continue;
                }
                audited_labelings += 1;
                let mass = if exact {
                    let p = exact_transcript_prob_involution(&group, &forest, &labels, m)?;
                    p.to_f64().unwrap().abs()
                } else {
                    transcript_prob_f64(&group, &forest, &labels, SubgroupCase::Involution(m))?
                        .abs()
                };
                max_mass = max_mass.max(mass);
            }
        }
    }
    let exact_audit_passed = if exact {
        max_mass == 0.0
    } else {
        max_mass < 1e-9
    };

    // Trivial-case Monte-Carlo: frequency of the missing harmonic per leaf.
    let leaves = 3usize;
    let model = TableModel::new(&group)?;
    let results: Vec<(u64, bool)> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_run_rng(seed, "dihedral-demo", i);
            let (forest, labels) = simulate_trivial(&model, leaves, Strategy::RandomPair, &mut rng);
            let leaf_hits = labels
                .iter()
                .enumerate()
                .filter(|(id, l)| forest.is_leaf(*id) && **l == sgn)
                .count() as u64;
            let anywhere = labels.iter().any(|l| *l == sgn);
            (leaf_hits, anywhere)
        })
        .collect();
    let mc_harmonic_leaves: u64 = results.iter().map(|(h, _)| h).sum();
    let mc_observed_runs = results.iter().filter(|(_, a)| *a).count() as u64;
    let mc_leaf_draws = runs * leaves as u64;
    let p = 1.0 / (2.0 * n as f64);
    let freq = mc_harmonic_leaves as f64 / mc_leaf_draws as f64;
    let sigma = (p * (1.0 - p) / mc_leaf_draws as f64).sqrt();
    Ok(DihedralDemo {
        n,
        missing_harmonic: "sgn".into(),
        audited_topologies,
        audited_labelings,
        max_mass_on_harmonic: max_mass,
        exact_audit_passed,
        leaf_prob_exact: Rat::new(BigInt::one(), BigInt::from(2 * n)),
        mc_runs: runs,
        mc_leaf_draws,
        mc_harmonic_leaves,
        mc_leaf_frequency: freq,
        mc_within_3_sigma: (freq - p).abs() <= 3.0 * sigma,
        mc_observed_runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_dihedral, make_symmetric, make_wreath_z2};
    use crate::scalar::{rat, rat_int};
    use crate::stats::{chi_square_quantile, chi_square_statistic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn two_leaf_tree() -> Forest {
        Forest::new(2, vec![None, None, Some((0, 1))]).unwrap()
    }

    #[test]
    fn single_node_reduces_to_plancherel_and_coset() {
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let forest = Forest::singletons(1);
        let order = g.order() as i64;
        for (idx, info) in g.irreps().iter().enumerate() {
            let p = exact_transcript_prob_trivial(&g, &forest, &[idx]).unwrap();
            assert_eq!(p, rat((info.dim * info.dim) as i64, order));
        }
        let m = g.wreath_flip_involution(0).unwrap();
        let coset = crate::dist::coset_leaf_dist(&g, m).unwrap();
        for idx in 0..g.irreps().len() {
            let p = exact_transcript_prob_involution(&g, &forest, &[idx], m).unwrap();
            assert_eq!(p, coset.prob(&idx), "irrep {idx}");
        }
    }

    #[test]
    fn z2_two_leaf_hand_enumeration() {
        // G = Z_2 (= S_2): P = 1/4 when the root label is the product of the
        // leaf labels, else 0. Verified against the literal assignment sum.
        let g = make_symmetric(2).unwrap();
        let forest = two_leaf_tree();
        for a in 0..2usize {
            for b in 0..2usize {
                for c in 0..2usize {
                    let p = exact_transcript_prob_trivial(&g, &forest, &[a, b, c]).unwrap();
                    // Irreps of S_2: 0 = trivial, 1 = sign; product xors.
                    let expect = if (a ^ b) == c { rat(1, 4) } else { rat_int(0) };
                    assert_eq!(p, expect, "{a} {b} {c}");
                    let brute =
                        assignment_sum_bruteforce(&g, &forest, &[a, b, c], SubgroupCase::Trivial)
                            .unwrap();
                    assert_eq!(p, brute);
                }
            }
        }
    }

    #[test]
    fn z2_involution_single_leaf() {
        let g = make_symmetric(2).unwrap();
        let forest = Forest::singletons(1);
        let m = 1usize; // the transposition
        assert!(g.is_involution(m));
        let triv = exact_transcript_prob_involution(&g, &forest, &[0], m).unwrap();
        let sign = exact_transcript_prob_involution(&g, &forest, &[1], m).unwrap();
        assert_eq!(triv, rat_int(1));
        assert_eq!(sign, rat_int(0));
    }

    #[test]
    fn dp_matches_bruteforce_on_wreath_s2() {
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let m = g.wreath_flip_involution(0).unwrap();
        let r = g.irreps().len();
        for forest in enumerate_all_forests(2, 3) {
            for labels in all_labelings(r, forest.k()) {
                for case in [SubgroupCase::Trivial, SubgroupCase::Involution(m)] {
                    let dp = exact_transcript_prob(&g, &forest, &labels, case).unwrap();
                    let brute = assignment_sum_bruteforce(&g, &forest, &labels, case).unwrap();
                    assert_eq!(dp, brute, "{labels:?} {case:?}");
                }
            }
        }
    }

    #[test]
    fn identity_assignment_contribution() {
        // The all-identity assignment is trivial and contributes exactly
        // ∏ d_i²/|G| per node: isolate it by evaluating on the one-element
        // subgroup S_1 (the identity assignment is the only assignment).
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let forest = two_leaf_tree();
        let labels = [0usize, 0, 1];
        let term = identity_assignment_term(&g, &labels);
        let mut expect = Rat::one();
        for &l in &labels {
            let d = g.irreps()[l].dim as i64;
            expect *= rat(d * d, g.order() as i64);
        }
        assert_eq!(term, expect);
        // Isolate the identity term in a literal enumeration over Z_2:
        // with labels (triv, triv, triv) the trivial assignments are
        // (x, x⁻¹, x⁻¹); the identity one contributes 1/8 of the 1/4 total.
        let z2 = make_symmetric(2).unwrap();
        let labels_z2 = [0usize, 0, 0];
        let id_term = identity_assignment_term(&z2, &labels_z2);
        assert_eq!(id_term, rat(1, 8));
        let total =
            assignment_sum_bruteforce(&z2, &forest, &labels_z2, SubgroupCase::Trivial).unwrap();
        assert_eq!(total, rat(1, 4));
        assert_eq!(&total - &id_term, rat(1, 8));
    }

    #[test]
    fn sibling_swap_invariance() {
        let g = make_wreath_z2(make_symmetric(3).unwrap()).unwrap();
        let m = g.wreath_flip_involution(0).unwrap();
        let forest = Forest::new(3, vec![None, None, None, Some((0, 1)), Some((3, 2))]).unwrap();
        let swapped = forest.with_swapped_children(3);
        let root_swapped = forest.with_swapped_children(4);
        let labels = [0usize, 3, 1, 2, 4];
        for case in [SubgroupCase::Trivial, SubgroupCase::Involution(m)] {
            let p = exact_transcript_prob(&g, &forest, &labels, case).unwrap();
            let q = exact_transcript_prob(&g, &swapped, &labels, case).unwrap();
            let s = exact_transcript_prob(&g, &root_swapped, &labels, case).unwrap();
            assert_eq!(p, q);
            assert_eq!(p, s);
        }
    }

    #[test]
    fn equality_audit_s2_max_k3() {
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let m = g.wreath_flip_involution(0).unwrap();
        let audit = inhomogeneity_equality_audit(&g, m, 3).unwrap();
        assert_eq!(audit.violations, 0);
        // Differences exist and they all carry a homogeneous label.
        assert!(audit.differing_labelings > 0);
        assert_eq!(audit.differing_labelings, audit.differing_with_hom);
    }

    #[test]
    fn distinguishing_bound_s2_single_leaf_is_dist_tvd() {
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let m = g.wreath_flip_involution(0).unwrap();
        let bounds = distinguishing_bound(&g, m, 1).unwrap();
        assert_eq!(bounds.len(), 1);
        let planch: Distribution<usize> = {
            let order = BigInt::from(g.order());
            Distribution::new(
                g.irreps()
                    .iter()
                    .enumerate()
                    .map(|(i, info)| {
                        let d = BigInt::from(info.dim);
                        (i, Rat::new(&d * &d, order.clone()))
                    })
                    .collect(),
            )
            .unwrap()
        };
        let coset = crate::dist::coset_leaf_dist(&g, m).unwrap();
        assert_eq!(bounds[0].tvd, crate::dist::tvd(&planch, &coset));
        assert_eq!(bounds[0].tvd, rat(1, 4));
    }

    #[test]
    fn table_model_exact_chain_frequencies_s2() {
        // ℓ = 2 combine-all over S_2 ≀ Z_2: joint (leaf, leaf, root)
        // frequencies match the exact chain within 3σ at 1e5 runs.
        let g = make_wreath_z2(make_symmetric(2).unwrap()).unwrap();
        let model = TableModel::new(&g).unwrap();
        let runs = 100_000u64;
        let r = g.irreps().len();
        let mut counts = vec![0u64; r * r * r];
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..runs {
            let (_, labels) = simulate_trivial(&model, 2, Strategy::PairAdjacent, &mut rng);
            counts[(labels[0] * r + labels[1]) * r + labels[2]] += 1;
        }
        let forest = two_leaf_tree();
        let mut probs = vec![0.0f64; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let p = exact_transcript_prob_trivial(&g, &forest, &[a, b, c]).unwrap();
                    probs[(a * r + b) * r + c] = p.to_f64().unwrap();
                }
            }
        }
        let stat = chi_square_statistic(&counts, &probs, runs);
        let df = probs.iter().filter(|p| **p > 0.0).count() - 1;
        assert!(
            stat < chi_square_quantile(df, 3.0),
            "chi-square {stat} at df {df}"
        );
    }

    #[test]
    fn wreath_pair_chain_matches_exact_natural_s3() {
        // Conditional root distribution given fixed parents equals the
        // wreath natural distribution (pairing construction vs WreathData).
        let table = CharacterTable::new(3).unwrap();
        let base = SmallBase::new(&table);
        let chain = WreathPairChain::new(&base);
        let data = crate::wreath::WreathData::new(&table);
        let parents = [
            PairLabel::Inhom(0, 1),
            PairLabel::Hom(1, Sign::Minus),
        ];
        let wreath_parents = [
            crate::wreath::WreathIrrep::inhom(
                table.irreps()[0].clone(),
                table.irreps()[1].clone(),
            )
            .unwrap(),
            crate::wreath::WreathIrrep::Hom(table.irreps()[1].clone(), Sign::Minus),
        ];
        let exact = data.natural(&wreath_parents[0], &wreath_parents[1]).unwrap();
        let runs = 100_000u64;
        let mut rng = ChaCha12Rng::seed_from_u64(12345);
        let irreps = data.irreps();
        let mut counts = vec![0u64; irreps.len()];
        for _ in 0..runs {
            let out = chain.combine(&parents[0], &parents[1], &mut rng);
            let w = match out {
                PairLabel::Inhom(a, b) => crate::wreath::WreathIrrep::inhom(
                    table.irreps()[a].clone(),
                    table.irreps()[b].clone(),
                )
                .unwrap(),
                PairLabel::Hom(a, s) => {
                    crate::wreath::WreathIrrep::Hom(table.irreps()[a].clone(), s)
                }
            };
            let idx = irreps.iter().position(|x| *x == w).unwrap();
            counts[idx] += 1;
        }
        let probs: Vec<f64> = irreps.iter().map(|w| exact.prob(w).to_f64().unwrap()).collect();
        let stat = chi_square_statistic(&counts, &probs, runs);
        let df = probs.iter().filter(|p| **p > 0.0).count() - 1;
        assert!(
            stat < chi_square_quantile(df, 3.0),
            "chi-square {stat} at df {df}"
        );
    }

    #[test]
    fn hit_experiment_small_n() {
        let rep = homogeneous_hit_experiment(3, 2, Strategy::RandomPair, 20_000, 7).unwrap();
        assert_eq!(rep.per_leaf_hom_prob, rat(1, 2));
        // Exact chance of at least one homogeneous leaf: 1 - (1/2)² = 3/4;
        // the run frequency must dominate it and stay within noise bounds.
        let leaf_freq = rep.leaf_hit_runs as f64 / rep.runs as f64;
        let sigma = (0.75f64 * 0.25 / rep.runs as f64).sqrt();
        assert!((leaf_freq - 0.75).abs() < 3.0 * sigma, "{leaf_freq}");
        assert!(rep.any_hit_runs >= rep.leaf_hit_runs);
        assert_eq!(
            rep.per_level.iter().map(|l| l.nodes).sum::<u64>(),
            rep.runs * 3
        );
    }

    #[test]
    fn hit_experiment_rejects_big_n() {
        assert!(homogeneous_hit_experiment(41, 2, Strategy::RandomPair, 1, 1).is_err());
    }

    #[test]
    fn dihedral_demo_d4() {
        let demo = dihedral_missing_harmonic_demo(4, 10_000, 42).unwrap();
        assert!(demo.exact_audit_passed);
        assert_eq!(demo.max_mass_on_harmonic, 0.0);
        assert_eq!(demo.leaf_prob_exact, rat(1, 8));
        assert!(demo.mc_within_3_sigma, "freq {}", demo.mc_leaf_frequency);
        assert!(demo.mc_observed_runs > 0);
        assert!(demo.audited_labelings > 0);
    }

    #[test]
    fn dihedral_demo_float_group() {
        let demo = dihedral_missing_harmonic_demo(5, 4_000, 43).unwrap();
        assert!(demo.exact_audit_passed);
        assert!(demo.max_mass_on_harmonic < 1e-9);
        assert!(demo.mc_within_3_sigma, "freq {}", demo.mc_leaf_frequency);
    }

    #[test]
    fn strategies_produce_valid_transcripts() {
        let g = make_dihedral(4).unwrap();
        let model = TableModel::new(&g).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for strategy in [
            Strategy::RandomPair,
            Strategy::GreedyLowestDimension,
            Strategy::PairAdjacent,
        ] {
            let (forest, labels) = simulate_trivial(&model, 5, strategy, &mut rng);
            assert_eq!(forest.leaves(), 5);
            assert_eq!(forest.k(), 9); // fully combined: 2ℓ - 1 nodes
            assert_eq!(labels.len(), 9);
            assert_eq!(forest.roots().len(), 1);
        }
        assert!(Strategy::parse("random-pair").is_ok());
        assert!(Strategy::parse("nope").is_err());
    }

    #[test]
    fn labelings_iterator_covers_space() {
        let all: Vec<Vec<usize>> = all_labelings(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert!(all.contains(&vec![2, 1]));
    }
}
