//! Concrete finite groups with dense integer element indices.
//!
//! Three constructions are provided: symmetric groups `S_n`, dihedral groups
//! `D_n` and wreath products `base ≀ Z₂`. Elements are indices `0..order`
//! with `0` the identity; groups of order at most [`MUL_TABLE_CAP`] carry an
//! explicit multiplication table, larger element-backed groups multiply
//! through their encoding rule, and symmetric groups beyond `n = 12` are
//! class-indexed only (cycle types and class sizes, no element enumeration).
//!
//! Character values are exposed per element. They are exact integers for
//! symmetric groups, wreath products of such, and the dihedral groups whose
//! two-dimensional characters are integral (`n ∈ {1,2,3,4,6}`); the remaining
//! dihedral groups fall back to floating point.

use crate::character::{class_size, CharacterTable};
use crate::partition::{enumerate_partitions, Partition};
use crate::perm::Perm;
use crate::{Error, Result};
use num::bigint::BigInt;
use num::ToPrimitive;
use std::sync::{Arc, OnceLock};

/// Largest order for which a dense multiplication table is materialized.
pub const MUL_TABLE_CAP: usize = 5000;

/// Largest element-enumerated symmetric group.
pub const SYMMETRIC_ENUM_CAP: u32 = 12;

/// Largest order for which per-element character vectors are handed out.
pub const CHAR_VECTOR_CAP: usize = 50_000;

const FACTORIALS: [usize; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3_628_800, 39_916_800, 479_001_600,
];

/// Identification of one irrep of a concrete group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrrepKind {
    /// Irrep of `S_n` labeled by a partition.
    SymPartition(Partition),
    /// One-dimensional dihedral irrep: 0 = trivial, 1 = sign,
    /// 2/3 = the two remaining characters of even `D_n`.
    DihOneDim(u8),
    /// Two-dimensional dihedral irrep with frequency `j`.
    DihTwoDim(u32),
    /// Inhomogeneous wreath irrep from an unordered pair of base irreps.
    WreathInhom(usize, usize),
    /// Homogeneous wreath irrep from a base irrep and a sign.
    WreathHom(usize, i8),
}

#[derive(Debug, Clone)]
pub struct IrrepInfo {
    pub name: String,
    pub dim: u64,
    pub kind: IrrepKind,
}

/// One conjugacy class: representative element (when elements exist),
/// exact size, and the cycle type for symmetric groups.
#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub rep: Option<usize>,
    pub size: BigInt,
    pub cycle_type: Option<Partition>,
}

#[derive(Debug)]
enum Backend {
    Symmetric(u32),
    Dihedral(u32),
    Wreath(Arc<ConcreteGroup>),
}

/// A finite group with optional element enumeration, class data, and irreps.
#[derive(Debug)]
pub struct ConcreteGroup {
    descriptor: String,
    order_big: BigInt,
    backend: Option<Backend>,
    mul_table: Option<Vec<u32>>,
    inv_table: Option<Vec<u32>>,
    classes: Option<Vec<ClassInfo>>,
    irreps: Vec<IrrepInfo>,
    sym_table: OnceLock<Arc<CharacterTable>>,
}

/// `S_n`. Element-enumerated for `n <= 12`, class-indexed for `12 < n <= 60`.
pub fn make_symmetric(n: u32) -> Result<ConcreteGroup> {
    if n == 0 {
        return Err(Error::invalid("symmetric group needs n >= 1"));
    }
    if n > 60 {
        return Err(Error::capability(format!(
            "symmetric group supports n <= 60 (class-indexed), got {n}"
        )));
    }
    let order_big = crate::scalar::factorial(n as u64);
    let class_types = enumerate_partitions(n)?;
    let enumerated = n <= SYMMETRIC_ENUM_CAP;
    let classes: Vec<ClassInfo> = class_types
        .iter()
        .map(|ct| ClassInfo {
            rep: enumerated.then(|| perm_rank(&canonical_perm(ct))),
            size: class_size(ct),
            cycle_type: Some(ct.clone()),
        })
        .collect();
    let irreps = if enumerated {
        class_types
            .iter()
            .map(|p| IrrepInfo {
                name: p.to_compact_string(),
                dim: p.dimension().to_u64().expect("dimension fits u64 for n <= 12"),
                kind: IrrepKind::SymPartition(p.clone()),
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut g = ConcreteGroup {
        descriptor: format!("sym:{n}"),
        order_big,
        backend: enumerated.then_some(Backend::Symmetric(n)),
        mul_table: None,
        inv_table: None,
        classes: Some(classes),
        irreps,
        sym_table: OnceLock::new(),
    };
    g.build_tables();
    Ok(g)
}

/// `D_n` of order `2n`, elements `r^k` at indices `0..n` and reflections
/// `s r^k` at `n..2n`. Reflection 0 is the canonical involution.
pub fn make_dihedral(n: u32) -> Result<ConcreteGroup> {
    if n < 2 {
        return Err(Error::invalid("dihedral group needs n >= 2"));
    }
    if 2 * n as usize > MUL_TABLE_CAP {
        return Err(Error::capability(format!(
            "dihedral group supports order <= {MUL_TABLE_CAP}, got {}",
            2 * n
        )));
    }
    let mut irreps = vec![
        IrrepInfo {
            name: "triv".into(),
            dim: 1,
            kind: IrrepKind::DihOneDim(0),
        },
        IrrepInfo {
            name: "sgn".into(),
            dim: 1,
            kind: IrrepKind::DihOneDim(1),
        },
    ];
    if n % 2 == 0 {
        irreps.push(IrrepInfo {
            name: "alt".into(),
            dim: 1,
            kind: IrrepKind::DihOneDim(2),
        });
        irreps.push(IrrepInfo {
            name: "altsgn".into(),
            dim: 1,
            kind: IrrepKind::DihOneDim(3),
        });
    }
    let two_dim_count = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for j in 1..=two_dim_count {
        irreps.push(IrrepInfo {
            name: format!("rho{j}"),
            dim: 2,
            kind: IrrepKind::DihTwoDim(j),
        });
    }
    let mut g = ConcreteGroup {
        descriptor: format!("dih:{n}"),
        order_big: BigInt::from(2 * n),
        backend: Some(Backend::Dihedral(n)),
        mul_table: None,
        inv_table: None,
        classes: None,
        irreps,
        sym_table: OnceLock::new(),
    };
    g.build_tables();
    g.classes = Some(g.generic_classes());
    Ok(g)
}

/// `base ≀ Z₂` of order `2·|base|²`. Non-flips occupy indices
/// `0..|base|²`, flips the rest.
pub fn make_wreath_z2(base: ConcreteGroup) -> Result<ConcreteGroup> {
    let b = base
        .order_usize()
        .ok_or_else(|| Error::capability("wreath base must be element-enumerated"))?;
    if b > MUL_TABLE_CAP {
        return Err(Error::capability(format!(
            "wreath base order {b} exceeds {MUL_TABLE_CAP}; use class-indexed mode"
        )));
    }
    let order = 2usize
        .checked_mul(b * b)
        .ok_or_else(|| Error::capability("wreath order overflows; use class-indexed mode"))?;
    let mut irreps = Vec::new();
    for i in 0..base.irreps.len() {
        for j in (i + 1)..base.irreps.len() {
            irreps.push(IrrepInfo {
                name: format!("inhom:{}|{}", base.irreps[i].name, base.irreps[j].name),
                dim: 2 * base.irreps[i].dim * base.irreps[j].dim,
                kind: IrrepKind::WreathInhom(i, j),
            });
        }
    }
    for (i, info) in base.irreps.iter().enumerate() {
        for sign in [1i8, -1i8] {
            irreps.push(IrrepInfo {
                name: format!(
                    "hom:{}:{}",
                    if sign > 0 { "+" } else { "-" },
                    info.name
                ),
                dim: info.dim * info.dim,
                kind: IrrepKind::WreathHom(i, sign),
            });
        }
    }
    let descriptor = format!("wreath:{}", base.descriptor);
    let mut g = ConcreteGroup {
        descriptor,
        order_big: BigInt::from(order),
        backend: Some(Backend::Wreath(Arc::new(base))),
        mul_table: None,
        inv_table: None,
        classes: None,
        irreps,
        sym_table: OnceLock::new(),
    };
    g.build_tables();
    if order <= MUL_TABLE_CAP {
        g.classes = Some(g.generic_classes());
    }
    Ok(g)
}

/// Parse "sym:n", "dih:n" or "wreath:<base descriptor>".
pub fn parse_group_descriptor(s: &str) -> Result<ConcreteGroup> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("wreath:") {
        return make_wreath_z2(parse_group_descriptor(rest)?);
    }
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("bad group descriptor {s:?}")))?;
    let n: u32 = arg
        .parse()
        .map_err(|_| Error::invalid(format!("bad group size in descriptor {s:?}")))?;
    match kind {
        "sym" => make_symmetric(n),
        "dih" => make_dihedral(n),
        _ => Err(Error::invalid(format!("unknown group kind {kind:?}"))),
    }
}

impl ConcreteGroup {
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn order_big(&self) -> &BigInt {
        &self.order_big
    }

    /// Order as usize; `None` in class-indexed mode.
    pub fn order_usize(&self) -> Option<usize> {
        self.backend.as_ref()?;
        self.order_big.to_usize()
    }

    /// Order for element-backed groups; panics in class-indexed mode.
    pub fn order(&self) -> usize {
        self.order_usize().expect("group is class-indexed")
    }

    pub fn is_element_backed(&self) -> bool {
        self.backend.is_some()
    }

    pub fn identity(&self) -> usize {
        0
    }

    fn build_tables(&mut self) {
        let Some(order) = self.order_usize() else {
            return;
        };
        if order > MUL_TABLE_CAP {
            return;
        }
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = self.mul_rule(a, b) as u32;
            }
        }
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let row = &mul[a * order..(a + 1) * order];
            let pos = row.iter().position(|&x| x == 0).expect("every row hits 1");
            inv[a] = pos as u32;
        }
        self.mul_table = Some(mul);
        self.inv_table = Some(inv);
    }

    fn mul_rule(&self, a: usize, b: usize) -> usize {
        match self.backend.as_ref().expect("element-backed") {
            Backend::Symmetric(n) => {
                let n = *n as usize;
                let pa = perm_unrank(a, n);
                let pb = perm_unrank(b, n);
                let composed: Vec<u32> = (0..n).map(|x| pa[pb[x] as usize]).collect();
                perm_rank(&composed)
            }
            Backend::Dihedral(n) => {
                let n = *n as usize;
                let (s, x) = (a / n, a % n);
                let (t, y) = (b / n, b % n);
                match (s, t) {
                    (0, 0) => (x + y) % n,
                    (0, 1) => n + (y + n - x) % n,
                    (1, 0) => n + (x + y) % n,
                    _ => (y + n - x) % n,
                }
            }
            Backend::Wreath(base) => {
                let m = base.order();
                let (s, ra) = (a / (m * m), a % (m * m));
                let (t, rb) = (b / (m * m), b % (m * m));
                let (a1, a2) = (ra / m, ra % m);
                let (b1, b2) = (rb / m, rb % m);
                let (c1, c2) = if s == 0 { (b1, b2) } else { (b2, b1) };
                let p1 = base.mul(a1, c1);
                let p2 = base.mul(a2, c2);
                ((s + t) % 2) * m * m + p1 * m + p2
            }
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.mul_table {
            let order = self.order();
            t[a * order + b] as usize
        } else {
            self.mul_rule(a, b)
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        if let Some(t) = &self.inv_table {
            return t[a] as usize;
        }
        match self.backend.as_ref().expect("element-backed") {
            Backend::Symmetric(n) => {
                let p = perm_unrank(a, *n as usize);
                let mut inv = vec![0u32; p.len()];
                for (i, &v) in p.iter().enumerate() {
                    inv[v as usize] = i as u32;
                }
                perm_rank(&inv)
            }
            Backend::Dihedral(n) => {
                let n = *n as usize;
                if a < n {
                    (n - a) % n
                } else {
                    a
                }
            }
            Backend::Wreath(base) => {
                let m = base.order();
                let (s, r) = (a / (m * m), a % (m * m));
                let (a1, a2) = (r / m, r % m);
                let (i1, i2) = (base.inv(a1), base.inv(a2));
                if s == 0 {
                    i1 * m + i2
                } else {
                    m * m + i2 * m + i1
                }
            }
        }
    }

    pub fn is_involution(&self, e: usize) -> bool {
        e != self.identity() && self.mul(e, e) == self.identity()
    }

    pub fn classes(&self) -> Option<&[ClassInfo]> {
        self.classes.as_deref()
    }

    pub fn irreps(&self) -> &[IrrepInfo] {
        &self.irreps
    }

    pub fn irrep_index_by_name(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|i| i.name == name)
    }

    /// Conjugacy classes by orbit computation; requires a mul table.
    fn generic_classes(&self) -> Vec<ClassInfo> {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut out: Vec<ClassInfo> = Vec::new();
        for x in 0..order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            for g in 0..order {
                let y = self.mul(self.mul(g, x), self.inv(g));
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            out.push(ClassInfo {
                rep: Some(x),
                size: BigInt::from(members.len()),
                cycle_type: None,
            });
        }
        out
    }

    /// The permutation behind a symmetric-group element index.
    pub fn symmetric_perm(&self, e: usize) -> Option<Perm> {
        match self.backend.as_ref()? {
            Backend::Symmetric(n) => Perm::new(perm_unrank(e, *n as usize)).ok(),
            _ => None,
        }
    }

    /// Index of a permutation in a symmetric group.
    pub fn symmetric_index(&self, p: &Perm) -> Option<usize> {
        match self.backend.as_ref()? {
            Backend::Symmetric(n) if p.n() == *n as usize => Some(perm_rank(p.images())),
            _ => None,
        }
    }

    /// Base group of a wreath product.
    pub fn wreath_base(&self) -> Option<&ConcreteGroup> {
        match self.backend.as_ref()? {
            Backend::Wreath(b) => Some(b),
            _ => None,
        }
    }

    /// Is a wreath element a non-flip (member of the index-2 subgroup K)?
    pub fn wreath_is_non_flip(&self, e: usize) -> Option<bool> {
        let base = self.wreath_base()?;
        let m = base.order();
        Some(e < m * m)
    }

    /// The flip `((α, α⁻¹), 1)`; with `α = 1` this is the canonical
    /// involution for subgroup experiments.
    pub fn wreath_flip_involution(&self, alpha: usize) -> Option<usize> {
        let base = self.wreath_base()?;
        let m = base.order();
        Some(m * m + alpha * m + base.inv(alpha))
    }

    /// Reflection `s r^axis` of a dihedral group.
    pub fn dihedral_reflection(&self, axis: u32) -> Option<usize> {
        match self.backend.as_ref()? {
            Backend::Dihedral(n) => (axis < *n).then(|| (*n + axis) as usize),
            _ => None,
        }
    }

    fn symmetric_table(&self) -> Result<Arc<CharacterTable>> {
        match self.backend.as_ref() {
            Some(Backend::Symmetric(n)) => {
                if let Some(t) = self.sym_table.get() {
                    return Ok(t.clone());
                }
                let t = Arc::new(CharacterTable::new(*n)?);
                let _ = self.sym_table.set(t.clone());
                Ok(self.sym_table.get().unwrap().clone())
            }
            _ => Err(Error::invalid("not a symmetric group")),
        }
    }

    /// Exact integer character value, `None` when irrational.
    pub fn char_i64(&self, irrep: usize, elem: usize) -> Option<i64> {
        match self.backend.as_ref()? {
            Backend::Symmetric(n) => {
                let p = Perm::new(perm_unrank(elem, *n as usize)).ok()?;
                let table = self.symmetric_table().ok()?;
                let IrrepKind::SymPartition(lam) = &self.irreps[irrep].kind else {
                    return None;
                };
                table.value(lam, &p.cycle_type()).ok()
            }
            Backend::Dihedral(n) => dihedral_char_i64(*n, &self.irreps[irrep].kind, elem),
            Backend::Wreath(base) => {
                let m = base.order();
                let (t, r) = (elem / (m * m), elem % (m * m));
                let (a, b) = (r / m, r % m);
                match &self.irreps[irrep].kind {
                    IrrepKind::WreathInhom(i, j) => {
                        if t == 1 {
                            Some(0)
                        } else {
                            let cia = base.char_i64(*i, a)?;
                            let cjb = base.char_i64(*j, b)?;
                            let cja = base.char_i64(*j, a)?;
                            let cib = base.char_i64(*i, b)?;
                            Some(cia * cjb + cja * cib)
                        }
                    }
                    IrrepKind::WreathHom(i, sign) => {
                        if t == 0 {
                            Some(base.char_i64(*i, a)? * base.char_i64(*i, b)?)
                        } else {
                            let ab = base.mul(a, b);
                            Some(i64::from(*sign) * base.char_i64(*i, ab)?)
                        }
                    }
                    _ => None,
                }
            }
        }
    }

    /// Character value as a float (exact when the character is integral).
    pub fn char_f64(&self, irrep: usize, elem: usize) -> f64 {
        if let Some(v) = self.char_i64(irrep, elem) {
            return v as f64;
        }
        match self.backend.as_ref().expect("element-backed") {
            Backend::Dihedral(n) => dihedral_char_f64(*n, &self.irreps[irrep].kind, elem),
            _ => unreachable!("only dihedral characters are irrational"),
        }
    }

    /// Do all irreps have exact integer characters?
    pub fn exact_characters(&self) -> bool {
        match self.backend.as_ref() {
            None => false,
            Some(Backend::Symmetric(_)) => true,
            Some(Backend::Dihedral(n)) => {
                let has_two_dim = self
                    .irreps
                    .iter()
                    .any(|i| matches!(i.kind, IrrepKind::DihTwoDim(_)));
                !has_two_dim || matches!(*n, 1 | 2 | 3 | 4 | 6)
            }
            Some(Backend::Wreath(base)) => base.exact_characters(),
        }
    }

    /// Per-element character vector, exact. Errors on irrational characters
    /// or when the group is too large to enumerate.
    pub fn char_vector_i64(&self, irrep: usize) -> Result<Vec<i64>> {
        let order = self
            .order_usize()
            .ok_or_else(|| Error::capability("group is class-indexed"))?;
        if order > CHAR_VECTOR_CAP {
            return Err(Error::capability(format!(
                "character vectors support order <= {CHAR_VECTOR_CAP}, got {order}"
            )));
        }
        (0..order)
            .map(|e| {
                self.char_i64(irrep, e)
                    .ok_or_else(|| Error::invalid("characters are irrational; use float mode"))
            })
            .collect()
    }

    /// Per-element character vector as floats.
    pub fn char_vector_f64(&self, irrep: usize) -> Result<Vec<f64>> {
        let order = self
            .order_usize()
            .ok_or_else(|| Error::capability("group is class-indexed"))?;
        if order > CHAR_VECTOR_CAP {
            return Err(Error::capability(format!(
                "character vectors support order <= {CHAR_VECTOR_CAP}, got {order}"
            )));
        }
        Ok((0..order).map(|e| self.char_f64(irrep, e)).collect())
    }
}

/// Exact `2 cos(2π m / n)` where it is an integer (reduced denominator
/// in {1, 2, 3, 4, 6}; by Niven's theorem every rational value arises there).
fn two_cos_exact(n: u32, m: u32) -> Option<i64> {
    let m = m % n;
    if m == 0 {
        return Some(2);
    }
    let g = num::integer::gcd(m, n);
    let (_m, n) = (m / g, n / g);
    match n {
        1 => Some(2),
        2 => Some(-2),
        3 => Some(-1),
        4 => Some(0),
        6 => Some(1),
        _ => None,
    }
}

fn dihedral_char_i64(n: u32, kind: &IrrepKind, elem: usize) -> Option<i64> {
    let nn = n as usize;
    let (t, k) = (elem / nn, elem % nn);
    match kind {
        IrrepKind::DihOneDim(0) => Some(1),
        IrrepKind::DihOneDim(1) => Some(if t == 0 { 1 } else { -1 }),
        IrrepKind::DihOneDim(2) => Some(if k % 2 == 0 { 1 } else { -1 }),
        IrrepKind::DihOneDim(3) => {
            let v = if k % 2 == 0 { 1 } else { -1 };
            Some(if t == 0 { v } else { -v })
        }
        IrrepKind::DihTwoDim(j) => {
            if t == 1 {
                Some(0)
            } else {
                two_cos_exact(n, (j * k as u32) % n)
            }
        }
        _ => None,
    }
}

fn dihedral_char_f64(n: u32, kind: &IrrepKind, elem: usize) -> f64 {
    if let Some(v) = dihedral_char_i64(n, kind, elem) {
        return v as f64;
    }
    let nn = n as usize;
    let (t, k) = (elem / nn, elem % nn);
    match kind {
        IrrepKind::DihTwoDim(j) => {
            if t == 1 {
                0.0
            } else {
                2.0 * (2.0 * std::f64::consts::PI * (*j as f64) * (k as f64) / n as f64).cos()
            }
        }
        _ => unreachable!("one-dimensional dihedral characters are integral"),
    }
}

fn canonical_perm(ct: &Partition) -> Vec<u32> {
    let mut images = Vec::with_capacity(ct.n() as usize);
    let mut start = 0u32;
    for &k in ct.parts() {
        for i in 0..k {
            images.push(start + (i + 1) % k);
        }
        start += k;
    }
    images
}

fn perm_rank(p: &[u32]) -> usize {
    let n = p.len();
    let mut elems: Vec<u32> = (0..n as u32).collect();
    let mut rank = 0usize;
    for (i, &v) in p.iter().enumerate() {
        let pos = elems.iter().position(|&x| x == v).unwrap();
        rank += pos * FACTORIALS[n - 1 - i];
        elems.remove(pos);
    }
    rank
}

fn perm_unrank(mut r: usize, n: usize) -> Vec<u32> {
    let mut elems: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = FACTORIALS[n - 1 - i];
        out.push(elems.remove(r / f));
        r %= f;
    }
    out
}
