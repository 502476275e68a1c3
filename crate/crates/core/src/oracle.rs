//! Brute-force operator oracle: dense regular-representation matrices,
//! isotypic projectors, subgroup projectors and trace-formula probabilities.
//!
//! Everything here works on the `|G|^ℓ`-dimensional space of `ℓ` group
//! registers, with basis vectors indexed mixed-radix by element tuples.
//! Matrices over integer-character groups are stored as integer numerators
//! with one common denominator, so every probability comes out as an exact
//! rational; groups with irrational characters use `f64` with a `1e-9`
//! tolerance. Operators are dense on purpose: this module is the ground
//! truth for the assignment-sum evaluators, not a place for scale.

use crate::forest::Forest;
use crate::group::ConcreteGroup;
use crate::scalar::Rat;
use crate::{Error, Result};
use num::bigint::BigInt;
use std::io::Write;

/// Hard cap on the register-space dimension `|G|^ℓ`.
pub const DIM_CAP: usize = 40_000;

/// The register space `C[G]^{⊗ℓ}` with mixed-radix basis indexing.
#[derive(Debug, Clone)]
pub struct OperatorSpace<'g> {
    group: &'g ConcreteGroup,
    registers: usize,
    dim: usize,
}

impl<'g> OperatorSpace<'g> {
    pub fn new(group: &'g ConcreteGroup, registers: usize) -> Result<Self> {
        let order = group
            .order_usize()
            .ok_or_else(|| Error::capability("operator space needs an element-backed group"))?;
        let mut dim = 1usize;
        for _ in 0..registers {
            dim = dim
                .checked_mul(order)
                .filter(|&d| d <= DIM_CAP)
                .ok_or_else(|| {
                    Error::capability(format!(
                        "|G|^l = {order}^{registers} exceeds {DIM_CAP}; use the assignment-sum evaluator"
                    ))
                })?;
        }
        Ok(OperatorSpace {
            group,
            registers,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &ConcreteGroup {
        self.group
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    /// The basis permutation of `reg(g)` applied to the registers in `I`:
    /// entry `v` holds the image index of basis vector `v`.
    pub fn reg_permutation(&self, g: usize, registers: &[usize]) -> Vec<u32> {
        let order = self.group.order();
        let mut perm = Vec::with_capacity(self.dim);
        let mut digits = vec![0usize; self.registers];
        for v in 0..self.dim {
            let mut x = v;
            for i in (0..self.registers).rev() {
                digits[i] = x % order;
                x /= order;
            }
            for &r in registers {
                digits[r] = self.group.mul(digits[r], g);
            }
            let mut image = 0usize;
            for &d in digits.iter() {
                image = image * order + d;
            }
            perm.push(image as u32);
        }
        perm
    }
}

/// Dense matrix of exact rationals: integer numerators over one common
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOperator {
    pub dim: usize,
    pub den: u128,
    num: Vec<i64>,
}

impl ExactOperator {
    pub fn identity(dim: usize) -> Self {
        let mut num = vec![0i64; dim * dim];
        for i in 0..dim {
            num[i * dim + i] = 1;
        }
        ExactOperator { dim, den: 1, num }
    }

    pub fn entry(&self, r: usize, c: usize) -> Rat {
        Rat::new(BigInt::from(self.num[r * self.dim + c]), BigInt::from(self.den))
    }

    /// Full matrix product; `O(dim³)`, for the small operators in tests.
    pub fn mul(&self, other: &ExactOperator) -> ExactOperator {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut num = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.num[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &other.num[k * n..(k + 1) * n];
                let out = &mut num[i * n..(i + 1) * n];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ExactOperator {
            dim: n,
            den: self.den * other.den,
            num,
        }
    }

    /// Exact equality as rational matrices (cross-multiplied).
    pub fn equal_as_rational(&self, other: &ExactOperator) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let (da, db) = (self.den as i128, other.den as i128);
        self.num
            .iter()
            .zip(&other.num)
            .all(|(&a, &b)| (a as i128) * db == (b as i128) * da)
    }

    /// Is this exactly idempotent (`M² = M`)?
    pub fn is_idempotent(&self) -> bool {
        self.mul(self).equal_as_rational(self)
    }

    pub fn trace(&self) -> Rat {
        let mut t: i128 = 0;
        for i in 0..self.dim {
            t += self.num[i * self.dim + i] as i128;
        }
        Rat::new(BigInt::from(t), BigInt::from(self.den))
    }

    /// `tr(M · P)` for a basis permutation `P` given as an image map.
    fn trace_with_perm(&self, perm: &[u32]) -> i128 {
        let mut t: i128 = 0;
        for u in 0..self.dim {
            t += self.num[u * self.dim + perm[u] as usize] as i128;
        }
        t
    }

    /// Debug dump, one CSV row per matrix row, entries as `num/den`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| crate::scalar::rat_string(&self.entry(r, c)))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Dense `f64` matrix for irrational-character groups.
#[derive(Debug, Clone)]
pub struct FloatOperator {
    pub dim: usize,
    data: Vec<f64>,
}

pub const FLOAT_TOL: f64 = 1e-9;

impl FloatOperator {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        FloatOperator { dim, data }
    }

    pub fn mul(&self, other: &FloatOperator) -> FloatOperator {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let out = &mut data[i * n..(i + 1) * n];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        FloatOperator { dim: n, data }
    }

    pub fn approx_eq(&self, other: &FloatOperator) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).abs() < FLOAT_TOL)
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self).approx_eq(self)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    fn trace_with_perm(&self, perm: &[u32]) -> f64 {
        (0..self.dim)
            .map(|u| self.data[u * self.dim + perm[u] as usize])
            .sum()
    }
}

/// Either flavor of dense operator.
#[derive(Debug, Clone)]
pub enum DenseOperator {
    Exact(ExactOperator),
    Float(FloatOperator),
}

impl DenseOperator {
    pub fn is_idempotent(&self) -> bool {
        match self {
            DenseOperator::Exact(m) => m.is_idempotent(),
            DenseOperator::Float(m) => m.is_idempotent(),
        }
    }

    pub fn trace_f64(&self) -> f64 {
        match self {
            DenseOperator::Exact(m) => {
                use num::ToPrimitive;
                m.trace().to_f64().unwrap()
            }
            DenseOperator::Float(m) => m.trace(),
        }
    }
}

/// `reg(g)` on one register: the `|G|×|G|` permutation matrix of `h ↦ hg`.
pub fn regular_rep(group: &ConcreteGroup, g: usize) -> Result<ExactOperator> {
    let order = group
        .order_usize()
        .ok_or_else(|| Error::capability("regular_rep needs an element-backed group"))?;
    if order > 100 {
        return Err(Error::capability(format!(
            "regular_rep supports |G| <= 100, got {order}"
        )));
    }
    let space = OperatorSpace::new(group, 1)?;
    let perm = space.reg_permutation(g, &[0]);
    let mut num = vec![0i64; order * order];
    for (v, &img) in perm.iter().enumerate() {
        num[img as usize * order + v] = 1;
    }
    Ok(ExactOperator {
        dim: order,
        den: 1,
        num,
    })
}

fn node_coefficients_i64(group: &ConcreteGroup, irrep: usize) -> Result<Vec<i64>> {
    let d = group.irreps()[irrep].dim as i64;
    Ok(group
        .char_vector_i64(irrep)?
        .into_iter()
        .map(|chi| d * chi)
        .collect())
}

/// Isotypic projector `Π_σ^I = (d_σ/|G|) Σ_g χ_σ(g)* reg(g)^I` as an
/// explicit matrix.
pub fn node_projector(
    space: &OperatorSpace,
    registers: &[usize],
    irrep: usize,
) -> Result<DenseOperator> {
    let group = space.group();
    let order = group.order();
    if group.exact_characters() {
        let coeff = node_coefficients_i64(group, irrep)?;
        let mut num = vec![0i64; space.dim() * space.dim()];
        for (g, &c) in coeff.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let perm = space.reg_permutation(g, registers);
            for (v, &img) in perm.iter().enumerate() {
                num[img as usize * space.dim() + v] += c;
            }
        }
        Ok(DenseOperator::Exact(ExactOperator {
            dim: space.dim(),
            den: order as u128,
            num,
        }))
    } else {
        let d = group.irreps()[irrep].dim as f64;
        let chi = group.char_vector_f64(irrep)?;
        let mut data = vec![0.0; space.dim() * space.dim()];
        for (g, &x) in chi.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let c = d * x / order as f64;
            let perm = space.reg_permutation(g, registers);
            for (v, &img) in perm.iter().enumerate() {
                data[img as usize * space.dim() + v] += c;
            }
        }
        Ok(DenseOperator::Float(FloatOperator {
            dim: space.dim(),
            data,
        }))
    }
}

/// `Π_H^{⊗ℓ} = 2^{-ℓ} Σ_{I ⊆ [ℓ]} reg(m)^I` for the involution `m`.
pub fn subgroup_projector(space: &OperatorSpace, m: usize) -> Result<ExactOperator> {
    let group = space.group();
    if !group.is_involution(m) {
        return Err(Error::NotAnInvolution);
    }
    let l = space.registers();
    let mut num = vec![0i64; space.dim() * space.dim()];
    for mask in 0u32..(1 << l) {
        let regs: Vec<usize> = (0..l).filter(|r| mask & (1 << r) != 0).collect();
        let perm = space.reg_permutation(m, &regs);
        for (v, &img) in perm.iter().enumerate() {
            num[img as usize * space.dim() + v] += 1;
        }
    }
    Ok(ExactOperator {
        dim: space.dim(),
        den: 1 << l,
        num,
    })
}

/// Apply the scaled node projector `Σ_g d χ(g) reg(g)^I` to `M` from the
/// left, multiplying the denominator by `|G|`. Costs `|G|·dim²` instead of
/// the `dim³` of a full product.
fn apply_node_exact(
    space: &OperatorSpace,
    m: &ExactOperator,
    registers: &[usize],
    irrep: usize,
) -> Result<ExactOperator> {
    let group = space.group();
    let coeff = node_coefficients_i64(group, irrep)?;
    let n = space.dim();
    let mut num = vec![0i64; n * n];
    for (g, &c) in coeff.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let perm = space.reg_permutation(g, registers);
        for (v, &img) in perm.iter().enumerate() {
            let src = &m.num[v * n..(v + 1) * n];
            let dst = &mut num[img as usize * n..(img as usize + 1) * n];
            for (o, &x) in dst.iter_mut().zip(src) {
                *o += c * x;
            }
        }
    }
    Ok(ExactOperator {
        dim: n,
        den: m.den * group.order() as u128,
        num,
    })
}

fn apply_node_float(
    space: &OperatorSpace,
    m: &FloatOperator,
    registers: &[usize],
    irrep: usize,
) -> Result<FloatOperator> {
    let group = space.group();
    let d = group.irreps()[irrep].dim as f64;
    let chi = group.char_vector_f64(irrep)?;
    let order = group.order() as f64;
    let n = space.dim();
    let mut data = vec![0.0; n * n];
    for (g, &x) in chi.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let c = d * x / order;
        let perm = space.reg_permutation(g, registers);
        for (v, &img) in perm.iter().enumerate() {
            let src = &m.data[v * n..(v + 1) * n];
            let dst = &mut data[img as usize * n..(img as usize + 1) * n];
            for (o, &y) in dst.iter_mut().zip(src) {
                *o += c * y;
            }
        }
    }
    Ok(FloatOperator { dim: n, data })
}

/// The full transcript projector `Π^T = ∏_i Π_{σ_i}^{I_i}`, exact flavor.
pub fn transcript_projector_exact(
    space: &OperatorSpace,
    forest: &Forest,
    labels: &[usize],
) -> Result<ExactOperator> {
    let mut m = ExactOperator::identity(space.dim());
    for (id, node) in forest.nodes().iter().enumerate() {
        m = apply_node_exact(space, &m, &node.leafset, labels[id])?;
    }
    Ok(m)
}

/// Probability of a labeled transcript by operator trace, exact flavor:
/// trivial case `tr(Π^T)/|G|^ℓ`, involution case
/// `(2^ℓ/|G|^ℓ) tr(Π^T Π_H^{⊗ℓ})`.
pub fn trace_prob_exact(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    case: crate::sieve::SubgroupCase,
) -> Result<Rat> {
    if !group.exact_characters() {
        return Err(Error::invalid(
            "group characters are irrational; use trace_prob_f64",
        ));
    }
    let space = OperatorSpace::new(group, forest.leaves())?;
    let m = transcript_projector_exact(&space, forest, labels)?;
    let order = BigInt::from(group.order());
    let order_l = order.pow(forest.leaves() as u32);
    match case {
        crate::sieve::SubgroupCase::Trivial => {
            // tr(M/den) / |G|^ℓ
            let t = {
                let mut acc: i128 = 0;
                for i in 0..m.dim {
                    acc += m.num[i * m.dim + i] as i128;
                }
                acc
            };
            Ok(Rat::new(
                BigInt::from(t),
                BigInt::from(m.den) * order_l,
            ))
        }
        crate::sieve::SubgroupCase::Involution(inv) => {
            if !group.is_involution(inv) {
                return Err(Error::NotAnInvolution);
            }
            // (2^ℓ/|G|^ℓ)·tr(M Π_H^{⊗ℓ}) with Π_H^{⊗ℓ} = 2^{-ℓ} Σ_I reg(m)^I:
            // the 2^ℓ factors cancel, leaving Σ_I tr(M reg(m)^I)/(den·|G|^ℓ).
            let l = space.registers();
            let mut total: i128 = 0;
            for mask in 0u32..(1 << l) {
                let regs: Vec<usize> = (0..l).filter(|r| mask & (1 << r) != 0).collect();
                let perm = space.reg_permutation(inv, &regs);
                total += m.trace_with_perm(&perm);
            }
            Ok(Rat::new(
                BigInt::from(total),
                BigInt::from(m.den) * order_l,
            ))
        }
    }
}

/// Floating-point trace probability for irrational-character groups.
pub fn trace_prob_f64(
    group: &ConcreteGroup,
    forest: &Forest,
    labels: &[usize],
    case: crate::sieve::SubgroupCase,
) -> Result<f64> {
    let space = OperatorSpace::new(group, forest.leaves())?;
    let mut m = FloatOperator::identity(space.dim());
    for (id, node) in forest.nodes().iter().enumerate() {
        m = apply_node_float(&space, &m, &node.leafset, labels[id])?;
    }
    let order_l = (group.order() as f64).powi(forest.leaves() as i32);
    match case {
        crate::sieve::SubgroupCase::Trivial => Ok(m.trace() / order_l),
        crate::sieve::SubgroupCase::Involution(inv) => {
            if !group.is_involution(inv) {
                return Err(Error::NotAnInvolution);
            }
            let l = space.registers();
            let mut total = 0.0;
            for mask in 0u32..(1 << l) {
                let regs: Vec<usize> = (0..l).filter(|r| mask & (1 << r) != 0).collect();
                let perm = space.reg_permutation(inv, &regs);
                total += m.trace_with_perm(&perm);
            }
            Ok(total / ((1u64 << l) as f64 * order_l) * 2.0_f64.powi(l as i32))
        }
    }
}

/// Trace probabilities for every labeling of one forest, both cases at once.
///
/// A depth-first walk over node labels shares the partial projector products
/// between labelings: prefixes whose product is the zero matrix prune their
/// whole subtree (every completion has zero trace in both cases), and the
/// final node's projector is folded into the trace computation instead of
/// being applied as a matrix. Returns one `(labels, P_trivial, P_involution)`
/// row per labeling, zeros included, in odometer order over labels.
pub fn trace_probs_batch(
    group: &ConcreteGroup,
    forest: &Forest,
    m: usize,
) -> Result<Vec<(Vec<usize>, Rat, Rat)>> {
    if !group.exact_characters() {
        return Err(Error::invalid("trace_probs_batch needs exact characters"));
    }
    if !group.is_involution(m) {
        return Err(Error::NotAnInvolution);
    }
    let space = OperatorSpace::new(group, forest.leaves())?;
    let k = forest.k();
    let r = group.irreps().len();
    let order = group.order();

    // Application order: children before parents, internal nodes as soon as
    // their children are placed (they prune hardest). The last node in this
    // order is folded into the traces.
    let mut app_order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while app_order.len() < k {
        let mut next: Option<usize> = None;
        for id in 0..k {
            if placed[id] {
                continue;
            }
            let ready = match forest.nodes()[id].children {
                None => true,
                Some((a, b)) => placed[a] && placed[b],
            };
            if !ready {
                continue;
            }
            let internal = forest.nodes()[id].children.is_some();
            match next {
                None => next = Some(id),
                Some(cur) => {
                    let cur_internal = forest.nodes()[cur].children.is_some();
                    if internal && !cur_internal {
                        next = Some(id);
                    }
                }
            }
        }
        let id = next.expect("forest is topologically ordered");
        placed[id] = true;
        app_order.push(id);
    }
    let folded = *app_order.last().unwrap();

    // Permutations and coefficient tables per node position.
    let perms: Vec<Vec<Vec<u32>>> = (0..k)
        .map(|id| {
            (0..order)
                .map(|g| space.reg_permutation(g, &forest.nodes()[id].leafset))
                .collect()
        })
        .collect();
    let coeffs: Vec<Vec<i64>> = (0..r)
        .map(|irrep| node_coefficients_i64(group, irrep))
        .collect::<Result<_>>()?;

    // Subset masks of registers for the involution trace.
    let l = forest.leaves();
    let subset_perms: Vec<Vec<u32>> = (0u32..(1 << l))
        .map(|mask| {
            let regs: Vec<usize> = (0..l).filter(|r| mask & (1 << r) != 0).collect();
            space.reg_permutation(m, &regs)
        })
        .collect();

    let mut labels = vec![0usize; k];
    let mut out: Vec<(Vec<usize>, Rat, Rat)> = Vec::new();
    let start = ExactOperator::identity(space.dim());

    // Depth-first over app_order positions.
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        pos: usize,
        app_order: &[usize],
        folded: usize,
        m_cur: &ExactOperator,
        labels: &mut Vec<usize>,
        r: usize,
        order: usize,
        space: &OperatorSpace,
        forest: &Forest,
        perms: &[Vec<Vec<u32>>],
        coeffs: &[Vec<i64>],
        subset_perms: &[Vec<u32>],
        out: &mut Vec<(Vec<usize>, Rat, Rat)>,
    ) {
        let node = app_order[pos];
        if node == folded {
            // Fold the last projector into the traces. With
            // M = m_cur.num / m_cur.den the product of the other k-1
            // projectors and Π_σ = (d/|G|) Σ_g χ(g) P_g:
            //   P^{1} = tr(Π_σ M) / |G|^ℓ
            //         = Σ_g dχ(g) tr(P_g M_num) / (den·|G|·|G|^ℓ)
            //   P^H   = (2^ℓ/|G|^ℓ) tr(Π_σ M Π_H^{⊗ℓ}), and the 2^ℓ factors
            //           cancel against Π_H's 2^{-ℓ}, giving
            //           Σ_g dχ(g) Σ_J tr(P_g M_num P_J) / (den·|G|·|G|^ℓ).
            // tr(P_g M P_J) = tr(M P_J P_g) = Σ_v M[(π_J ∘ π_g)(v), v].
            let dim = space.dim();
            let t_triv: Vec<i128> = (0..order)
                .map(|g| {
                    let perm = &perms[node][g];
                    let mut acc: i128 = 0;
                    for v in 0..dim {
                        acc += m_cur.num[perm[v] as usize * dim + v] as i128;
                    }
                    acc
                })
                .collect();
            let t_inv: Vec<i128> = (0..order)
                .map(|g| {
                    let perm_g = &perms[node][g];
                    let mut acc: i128 = 0;
                    for pj in subset_perms {
                        for v in 0..dim {
                            let row = pj[perm_g[v] as usize] as usize;
                            acc += m_cur.num[row * dim + v] as i128;
                        }
                    }
                    acc
                })
                .collect();
            let den =
                BigInt::from(m_cur.den) * BigInt::from(order).pow(1 + space.registers() as u32);
            for label in 0..r {
                labels[node] = label;
                let mut triv: i128 = 0;
                let mut inv: i128 = 0;
                for g in 0..order {
                    let c = coeffs[label][g] as i128;
                    if c == 0 {
                        continue;
                    }
                    triv += c * t_triv[g];
                    inv += c * t_inv[g];
                }
                let p1 = Rat::new(BigInt::from(triv), den.clone());
                let ph = Rat::new(BigInt::from(inv), den.clone());
                out.push((labels.clone(), p1, ph));
            }
            return;
        }
        for label in 0..r {
            labels[node] = label;
            let next = apply_node_exact(space, m_cur, &forest.nodes()[node].leafset, label)
                .expect("exact characters");
            if next.num.iter().all(|&x| x == 0) {
                // Entire subtree of completions has zero trace in both cases.
                emit_zero_subtree(pos + 1, app_order, labels, r, out);
                continue;
            }
            dfs(
                pos + 1,
                app_order,
                folded,
                &next,
                labels,
                r,
                order,
                space,
                forest,
                perms,
                coeffs,
                subset_perms,
                out,
            );
        }
    }

    fn emit_zero_subtree(
        pos: usize,
        app_order: &[usize],
        labels: &mut Vec<usize>,
        r: usize,
        out: &mut Vec<(Vec<usize>, Rat, Rat)>,
    ) {
        use num::Zero;
        if pos == app_order.len() {
            out.push((labels.clone(), Rat::zero(), Rat::zero()));
            return;
        }
        let node = app_order[pos];
        for label in 0..r {
            labels[node] = label;
            emit_zero_subtree(pos + 1, app_order, labels, r, out);
        }
    }

    dfs(
        0,
        &app_order,
        folded,
        &start,
        &mut labels,
        r,
        order,
        &space,
        forest,
        &perms,
        &coeffs,
        &subset_perms,
        &mut out,
    );
    // Canonical odometer order over node ids for stable comparison.
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
