//! Cycle layouts of odd-order coordinate permutations and the two
//! decompositions they induce on invariant binary codes: the splitting
//! into the fixed subcode F and the cycle-wise even subcode E, and the
//! ring image of the even part over the full-length cycles.
//!
//! All operations work against a contiguous block layout (cycle i owns a
//! consecutive run of coordinates). An arbitrary permutation is brought
//! into this layout once by [`CycleStructure::normalize`], which records
//! the relabeling, so serialized artifacts stay comparable across runs no
//! matter how the input coordinates were ordered.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compcodes::ComponentCode;
use crate::gf2core::{fixed_subcode, kernel_basis, BinaryCode, Perm};
use crate::ringalg::{ComponentField, RingPoly};

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("code is not invariant under the block permutation")]
    NotInvariant,
    #[error("row {row} is not constant on cycle {cycle}")]
    NotConstantOnCycle { row: usize, cycle: usize },
    #[error("coordinate {coord} lies outside the full cycles but carries support")]
    SupportViolation { coord: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Disjoint-cycle layout of an odd-order coordinate permutation.
///
/// Cycle i occupies the contiguous block starting at `starts[i]`; within a
/// block the permutation sends each coordinate to its successor, so on
/// words it acts as multiplication by x in the block's polynomial reading
/// (bit j of a block = coefficient of x^j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStructure {
    lengths: Vec<usize>,
    starts: Vec<usize>,
    n: usize,
    r: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn low_mask(l: usize) -> u128 {
    if l == 128 {
        !0
    } else {
        (1u128 << l) - 1
    }
}

impl CycleStructure {
    pub fn from_lengths(lengths: Vec<usize>) -> Self {
        assert!(!lengths.is_empty(), "at least one cycle");
        let mut r = 1usize;
        let mut starts = Vec::with_capacity(lengths.len());
        let mut n = 0usize;
        for &l in &lengths {
            assert!(l % 2 == 1, "cycle lengths must be odd");
            r = r / gcd(r, l) * l;
            starts.push(n);
            n += l;
        }
        assert!(n <= 128, "128-coordinate word limit");
        CycleStructure { lengths, starts, n, r }
    }

    /// c cycles of length l followed by f fixed points.
    pub fn uniform(l: usize, c: usize, f: usize) -> Self {
        let mut lengths = vec![l; c];
        lengths.extend(std::iter::repeat(1).take(f));
        Self::from_lengths(lengths)
    }

    /// Order-15 action on 96 coordinates: six 15-cycles and two 3-cycles.
    pub fn order15_f0() -> Self {
        Self::from_lengths(vec![15, 15, 15, 15, 15, 15, 3, 3])
    }

    /// Order-15 action on 96 coordinates: six 15-cycles and six fixed points.
    pub fn order15_f6() -> Self {
        Self::uniform(15, 6, 6)
    }

    /// Order-3 action of type 3-(28,12) on 96 coordinates.
    pub fn type3_28_12() -> Self {
        Self::uniform(3, 28, 12)
    }

    /// Contiguous relabeling of an arbitrary odd-order permutation.
    ///
    /// Cycles are sorted longest first (ties by smallest moved coordinate)
    /// and laid out in blocks. Returns the layout together with the
    /// relabeling rho: if `sigma` fixes a code C, then the layout's
    /// permutation fixes `C.permuted(&rho)`.
    pub fn normalize(sigma: &Perm) -> (Self, Perm) {
        let mut cycles = sigma.cycles();
        cycles.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
        let cs = Self::from_lengths(cycles.iter().map(|c| c.len()).collect());
        let mut map = vec![0usize; sigma.n()];
        let mut pos = 0;
        for cyc in &cycles {
            // Orbit order within the cycle, so successor goes to successor.
            for &old in cyc {
                map[old] = pos;
                pos += 1;
            }
        }
        (cs, Perm::from_map(map))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cycles (fixed points included).
    pub fn m(&self) -> usize {
        self.lengths.len()
    }

    /// Order of the permutation: lcm of the cycle lengths.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn support(&self, i: usize) -> std::ops::Range<usize> {
        self.starts[i]..self.starts[i] + self.lengths[i]
    }

    pub fn block_mask(&self, i: usize) -> u128 {
        low_mask(self.lengths[i]) << self.starts[i]
    }

    /// Number of cycles of full length r.
    pub fn full_cycle_count(&self) -> usize {
        self.lengths.iter().filter(|&&l| l == self.r).count()
    }

    /// Full cycles must occupy the leading blocks for the shortening and
    /// ring-image operations; returns their count.
    fn full_prefix(&self) -> Result<usize, DecompError> {
        let c = self.full_cycle_count();
        if self.lengths[..c].iter().any(|&l| l != self.r) {
            return Err(DecompError::ShapeMismatch(
                "full-length cycles must come first in the layout".into(),
            ));
        }
        Ok(c)
    }

    pub fn permutation(&self) -> Perm {
        let mut map = vec![0usize; self.n];
        for i in 0..self.m() {
            let (s, l) = (self.starts[i], self.lengths[i]);
            for j in 0..l {
                map[s + j] = s + (j + 1) % l;
            }
        }
        Perm::from_map(map)
    }

    /// Some(p-(c,f)) when every non-trivial cycle has the same length p.
    pub fn automorphism_type(&self) -> Option<AutomorphismType> {
        let p = *self.lengths.iter().max().unwrap();
        if p == 1 || self.lengths.iter().any(|&l| l != p && l != 1) {
            return None;
        }
        let c = self.lengths.iter().filter(|&&l| l == p).count();
        Some(AutomorphismType { p, c, f: self.m() - c })
    }
}

/// Uniform cycle type p-(c,f): c cycles of odd length p plus f fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismType {
    pub p: usize,
    pub c: usize,
    pub f: usize,
}

impl AutomorphismType {
    pub fn n(&self) -> usize {
        self.p * self.c + self.f
    }

    /// dim F for a self-dual invariant code.
    pub fn fixed_dim(&self) -> usize {
        (self.c + self.f) / 2
    }

    /// dim E for a self-dual invariant code.
    pub fn even_dim(&self) -> usize {
        self.c * (self.p - 1) / 2
    }
}

/// Splits an invariant code into the subcode fixed by the permutation and
/// the subcode whose words have even weight on every cycle. The two parts
/// intersect trivially and together span the whole code.
pub fn fixed_and_even_parts(
    code: &BinaryCode,
    cs: &CycleStructure,
) -> Result<(BinaryCode, BinaryCode), DecompError> {
    if code.n() != cs.n() {
        return Err(DecompError::ShapeMismatch(format!(
            "code length {} != layout length {}",
            code.n(),
            cs.n()
        )));
    }
    let sigma = cs.permutation();
    if &code.permuted(&sigma) != code {
        return Err(DecompError::NotInvariant);
    }
    let fixed = fixed_subcode(code, &sigma);

    // E is cut out by one parity functional per cycle.
    let parities: Vec<u128> = code
        .rows()
        .iter()
        .map(|&g| {
            let mut b = 0u128;
            for i in 0..cs.m() {
                if (g & cs.block_mask(i)).count_ones() % 2 == 1 {
                    b |= 1u128 << i;
                }
            }
            b
        })
        .collect();
    let rows = kernel_basis(&parities, cs.m())
        .into_iter()
        .map(|mut m| {
            let mut w = 0u128;
            while m != 0 {
                w ^= code.rows()[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            w
        })
        .collect();
    let even = BinaryCode::new(code.n(), rows).unwrap();
    debug_assert_eq!(fixed.k() + even.k(), code.k());
    Ok((fixed, even))
}

/// The averaging map v + sigma(v) + ... + sigma^(r-1)(v); it lands in the
/// fixed subcode and restricts to the identity there (r is odd).
pub fn trace_fixed(word: u128, cs: &CycleStructure) -> u128 {
    let sigma = cs.permutation();
    let mut acc = word;
    let mut cur = word;
    for _ in 1..cs.r() {
        cur = sigma.apply_word(cur);
        acc ^= cur;
    }
    acc
}

/// One coordinate per cycle; rows must be constant on every cycle.
pub fn project_pi(fixed: &BinaryCode, cs: &CycleStructure) -> Result<BinaryCode, DecompError> {
    if fixed.n() != cs.n() {
        return Err(DecompError::ShapeMismatch(format!(
            "code length {} != layout length {}",
            fixed.n(),
            cs.n()
        )));
    }
    let mut rows = Vec::with_capacity(fixed.k());
    for (ri, &w) in fixed.rows().iter().enumerate() {
        let mut out = 0u128;
        for i in 0..cs.m() {
            let blk = (w >> cs.starts[i]) & low_mask(cs.lengths[i]);
            if blk == low_mask(cs.lengths[i]) {
                out |= 1u128 << i;
            } else if blk != 0 {
                return Err(DecompError::NotConstantOnCycle { row: ri, cycle: i });
            }
        }
        rows.push(out);
    }
    Ok(BinaryCode::new(cs.m(), rows).unwrap())
}

/// Replicates each coordinate across its cycle (the section of the
/// projection).
pub fn pi_expand_word(x: u128, cs: &CycleStructure) -> u128 {
    debug_assert_eq!(x >> cs.m(), 0);
    let mut w = 0u128;
    for i in 0..cs.m() {
        if x >> i & 1 == 1 {
            w |= cs.block_mask(i);
        }
    }
    w
}

pub fn pi_expand(code: &BinaryCode, cs: &CycleStructure) -> BinaryCode {
    assert_eq!(code.n(), cs.m());
    let rows = code.rows().iter().map(|&x| pi_expand_word(x, cs)).collect();
    BinaryCode::new(cs.n(), rows).unwrap()
}

/// Weight of the replicated word: sum of the lengths of the flagged cycles.
pub fn preimage_weight(x: u128, cs: &CycleStructure) -> usize {
    debug_assert_eq!(x >> cs.m(), 0);
    (0..cs.m()).filter(|&i| x >> i & 1 == 1).map(|i| cs.lengths[i]).sum()
}

/// Subcode of the words vanishing outside the leading full cycles, with
/// the trailing coordinates removed.
pub fn shorten_to_full_cycles(
    code: &BinaryCode,
    cs: &CycleStructure,
) -> Result<BinaryCode, DecompError> {
    let c = cs.full_prefix()?;
    let span = c * cs.r();
    if code.n() != cs.n() {
        return Err(DecompError::ShapeMismatch(format!(
            "code length {} != layout length {}",
            code.n(),
            cs.n()
        )));
    }
    let tails: Vec<u128> = code.rows().iter().map(|&g| g >> span).collect();
    let rows = kernel_basis(&tails, cs.n() - span)
        .into_iter()
        .map(|mut m| {
            let mut w = 0u128;
            while m != 0 {
                w ^= code.rows()[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            debug_assert_eq!(w >> span, 0);
            w
        })
        .collect();
    Ok(BinaryCode::new(span, rows).unwrap())
}

/// Ring image of a code supported on the leading full cycles: block i
/// becomes the ring coordinate v_i(x) = sum_j v_{i,j} x^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiImage {
    r: usize,
    c: usize,
    rows: Vec<Vec<RingPoly>>,
}

pub fn phi_map(e_star: &BinaryCode, cs: &CycleStructure) -> Result<PhiImage, DecompError> {
    let c = cs.full_prefix()?;
    let r = cs.r();
    let span = c * r;
    let words: Vec<u128> = if e_star.n() == span {
        e_star.rows().to_vec()
    } else if e_star.n() == cs.n() {
        for &w in e_star.rows() {
            if w >> span != 0 {
                return Err(DecompError::SupportViolation {
                    coord: span + (w >> span).trailing_zeros() as usize,
                });
            }
        }
        e_star.rows().to_vec()
    } else {
        return Err(DecompError::ShapeMismatch(format!(
            "code length {} fits neither {} nor {}",
            e_star.n(),
            span,
            cs.n()
        )));
    };
    let rows = words
        .into_iter()
        .map(|w| {
            (0..c)
                .map(|i| RingPoly::from_mask(r, ((w >> (i * r)) & low_mask(r)) as u64))
                .collect()
        })
        .collect();
    Ok(PhiImage { r, c, rows })
}

/// sum_i u_i * conj(v_i) over the group ring, where conj sends x to x^(r-1).
pub fn hermitian_ring_ip(u: &[RingPoly], v: &[RingPoly]) -> RingPoly {
    assert!(!u.is_empty() && u.len() == v.len());
    let mut acc = RingPoly::zero(u[0].r());
    for (&a, &b) in u.iter().zip(v) {
        acc = acc.add(a.mul(b.conj()));
    }
    acc
}

impl PhiImage {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn rows(&self) -> &[Vec<RingPoly>] {
        &self.rows
    }

    /// Projection through the field's idempotent; rows are re-echelonized
    /// over the component field.
    pub fn component(&self, field: &Arc<ComponentField>) -> ComponentCode {
        let e = field.component.idempotent;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| {
                        field
                            .index_of(v.mul(e))
                            .expect("idempotent projection stays inside the component")
                    })
                    .collect()
            })
            .collect();
        ComponentCode::new(field.clone(), self.c, rows)
    }

    pub fn is_hermitian_self_orthogonal(&self) -> bool {
        self.rows
            .iter()
            .all(|u| self.rows.iter().all(|v| hermitian_ring_ip(u, v).is_zero()))
    }
}

/// Binary span of explicit ring words: the coordinate bijection inverse to
/// [`phi_map`]. Only F2-combinations of the given words are spanned; the
/// full binary preimage of a component code (closed under field scalars)
/// is [`ComponentCode::binary_image`].
pub fn phi_inverse(r: usize, c: usize, rows: &[Vec<RingPoly>]) -> BinaryCode {
    let words = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), c);
            row.iter().enumerate().fold(0u128, |acc, (i, v)| {
                assert_eq!(v.r(), r);
                acc | (v.mask() as u128) << (i * r)
            })
        })
        .collect();
    BinaryCode::new(c * r, words).unwrap()
}

/// Self-orthogonality cap c(r-1)/2 on the dimension of the shortened even
/// part over the full cycles.
pub fn dim_bound_check(cs: &CycleStructure) -> usize {
    cs.full_cycle_count() * (cs.r() - 1) / 2
}

/// The component slots of the ring image over the full cycles, in the
/// fixed order used by generator matrices and reports.
#[derive(Clone, Debug, Default)]
pub struct ComponentSet {
    pub m1: Option<ComponentCode>,
    pub m2: Option<ComponentCode>,
    pub mprime: Option<ComponentCode>,
    pub mdouble: Option<ComponentCode>,
}

/// Transformation of component data before gluing. Applied as: block
/// relabeling, then per-block shifts, then the field automorphism. All
/// three are induced by binary coordinate permutations of the full-cycle
/// span, so they preserve weights and orthogonality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    /// Relabeling of the c full-cycle blocks (column j reads old column
    /// block_perm[j]).
    pub block_perm: Vec<usize>,
    /// Per-block multiplication by x^shift.
    pub shifts: Vec<usize>,
    /// Entrywise field automorphism exponent; 1 leaves entries alone.
    pub frobenius: usize,
    /// Relabeling of the projected fixed-code coordinates.
    pub template_perm: Vec<usize>,
}

impl Gluing {
    pub fn identity(c: usize, m: usize) -> Self {
        Gluing {
            block_perm: (0..c).collect(),
            shifts: vec![0; c],
            frobenius: 1,
            template_perm: (0..m).collect(),
        }
    }

    pub fn apply(&self, code: &ComponentCode) -> ComponentCode {
        code.permuted_cols(&self.block_perm)
            .shifted_cols(&self.shifts)
            .frobenius(self.frobenius)
    }
}

/// Entry notation for serialized component matrices: "x^d·e" when the
/// element is an in-block shift of the component identity (always the case
/// where x generates the multiplicative group), otherwise "g^d·e" against
/// the field's pinned generator.
pub fn entry_label(field: &ComponentField, a: u8) -> String {
    if a == 0 {
        return "0".into();
    }
    let e = field.index_of(field.component.idempotent).expect("identity is a field element");
    let x = field.x_index();
    let mut cur = e;
    for d in 0..field.component.x_order {
        if cur == a {
            return format!("x^{d}·e");
        }
        cur = field.mul(cur, x);
    }
    format!("g^{}·e", field.dlog(a).expect("nonzero element has a discrete log"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentBlockDescriptor {
    pub label: String,
    /// Smallest exponent of the 2-cyclotomic coset of the component.
    pub coset_rep: usize,
    pub rows: Vec<Vec<String>>,
}

/// Everything needed to rebuild one glued candidate from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyDescriptor {
    pub cycle_lengths: Vec<usize>,
    pub components: Vec<ComponentBlockDescriptor>,
    pub gluing: Gluing,
    pub fixed_template: Vec<String>,
    pub binary_generator_matrix: Vec<String>,
}

pub struct CandidateAssembly {
    pub code: BinaryCode,
    pub descriptor: AssemblyDescriptor,
}

impl CandidateAssembly {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.descriptor).expect("descriptor serializes")
    }
}

pub fn bit_strings(code: &BinaryCode) -> Vec<String> {
    code.rows()
        .iter()
        .map(|&w| (0..code.n()).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect())
        .collect()
}

/// Stacks the binary preimages of the glued components with the replicated
/// rows of the (permuted) fixed template. The result's dimension must be
/// the sum of the parts; a rank collapse is reported, not repaired.
pub fn assemble(
    cs: &CycleStructure,
    parts: &ComponentSet,
    fixed_template: &BinaryCode,
    gluing: &Gluing,
) -> Result<CandidateAssembly, DecompError> {
    let c = cs.full_prefix()?;
    let r = cs.r();
    let m = cs.m();
    if fixed_template.n() != m {
        return Err(DecompError::ShapeMismatch(format!(
            "fixed template length {} != cycle count {m}",
            fixed_template.n()
        )));
    }
    if gluing.block_perm.len() != c || gluing.shifts.len() != c || gluing.template_perm.len() != m
    {
        return Err(DecompError::ShapeMismatch("gluing sized for a different layout".into()));
    }

    let mut rows: Vec<u128> = Vec::new();
    let mut expected = fixed_template.k();
    let mut components = Vec::new();
    let slots = [
        ("M1", &parts.m1),
        ("M2", &parts.m2),
        ("M'", &parts.mprime),
        ("M''", &parts.mdouble),
    ];
    for (label, slot) in slots {
        let Some(code) = slot else { continue };
        if code.n() != c {
            return Err(DecompError::ShapeMismatch(format!(
                "{label} has length {}, expected {c}",
                code.n()
            )));
        }
        if code.field().r != r {
            return Err(DecompError::ShapeMismatch(format!(
                "{label} lives over a ring of order {}, expected {r}",
                code.field().r
            )));
        }
        let glued = gluing.apply(code);
        let image = glued.binary_image();
        expected += image.k();
        rows.extend_from_slice(image.rows());
        components.push(ComponentBlockDescriptor {
            label: label.into(),
            coset_rep: code.field().component.coset[0],
            rows: glued
                .rows()
                .iter()
                .map(|row| row.iter().map(|&a| entry_label(code.field(), a)).collect())
                .collect(),
        });
    }

    let template = fixed_template.permuted(&Perm::from_map(gluing.template_perm.clone()));
    rows.extend(template.rows().iter().map(|&t| pi_expand_word(t, cs)));

    let code = BinaryCode::new(cs.n(), rows).unwrap();
    if code.k() != expected {
        return Err(DecompError::ShapeMismatch(format!(
            "rank collapse: assembled {} of {expected} dimensions",
            code.k()
        )));
    }
    let descriptor = AssemblyDescriptor {
        cycle_lengths: cs.lengths().to_vec(),
        components,
        gluing: gluing.clone(),
        fixed_template: bit_strings(fixed_template),
        binary_generator_matrix: bit_strings(&code),
    };
    Ok(CandidateAssembly { code, descriptor })
}

/// Smallest invariant code containing the given words: the span of their
/// orbits under the block permutation.
pub fn invariant_closure(cs: &CycleStructure, words: &[u128]) -> BinaryCode {
    let sigma = cs.permutation();
    let mut rows = Vec::with_capacity(words.len() * cs.r());
    for &w in words {
        let mut cur = w;
        for _ in 0..cs.r() {
            rows.push(cur);
            cur = sigma.apply_word(cur);
        }
    }
    BinaryCode::new(cs.n(), rows).unwrap()
}

/// Field component of the factor x+1 for r = 15 (conjugation-trivial, two
/// elements: zero and the all-ones idempotent).
pub fn g0_field() -> Arc<ComponentField> {
    static FIELD: std::sync::OnceLock<Arc<ComponentField>> = std::sync::OnceLock::new();
    FIELD
        .get_or_init(|| {
            let fz = crate::ringalg::factor_cyclic(15).expect("r = 15 factors");
            let comp = fz.component_by_coset_rep(0).expect("the x+1 component");
            Arc::new(ComponentField::new(15, comp).expect("degree-1 component field"))
        })
        .clone()
}

/// Random Hermitian self-dual code of even length, grown one word at a
/// time: each step adjoins a random norm-zero word of the current
/// Hermitian dual.
pub fn random_hermitian_self_dual(
    field: &Arc<ComponentField>,
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> ComponentCode {
    use rand::Rng;
    assert!(n % 2 == 0);
    let q = field.q();
    let mut code = ComponentCode::zero(field.clone(), n);
    while code.k() < n / 2 {
        let dual = code.dual(crate::compcodes::Ip::Hermitian);
        loop {
            let mut w = vec![0u8; n];
            for row in dual.rows() {
                let scale = rng.gen_range(0..q) as u8;
                for (acc, &a) in w.iter_mut().zip(row) {
                    *acc = field.add(*acc, field.mul(scale, a));
                }
            }
            let norm = w
                .iter()
                .fold(0u8, |acc, &a| field.add(acc, field.mul(a, field.conj(a))));
            if norm == 0 && w.iter().any(|&a| a != 0) && !code.contains(&w) {
                let mut rows: Vec<Vec<u8>> = code.rows().to_vec();
                rows.push(w);
                code = ComponentCode::new(field.clone(), n, rows);
                break;
            }
        }
    }
    debug_assert!(code.is_hermitian_self_dual());
    code
}

/// Random self-dual quasi-cyclic code of length 15c (c even), built from
/// random self-dual component data: a binary self-dual code on the x+1
/// component, Hermitian self-dual codes on the self-conjugate components,
/// and a dual pair on the conjugate-swapped pair.
pub fn random_self_dual_quasicyclic(c: usize, seed: u64) -> (BinaryCode, CycleStructure) {
    use rand::{Rng, SeedableRng};
    assert!(c % 2 == 0 && c >= 2);
    let cs = CycleStructure::uniform(15, c, 0);
    let inv = crate::compcodes::inventory::Inventory::get();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let sd = crate::gf2core::random_self_dual(c, rng.gen());
    let g0 = g0_field();
    let m0 = ComponentCode::new(
        g0.clone(),
        c,
        sd.rows().iter().map(|&w| (0..c).map(|i| (w >> i & 1) as u8).collect()).collect(),
    );
    let m1 = random_hermitian_self_dual(&inv.g1_field, c, &mut rng);
    let m2 = random_hermitian_self_dual(&inv.g2_field, c, &mut rng);
    let kp = rng.gen_range(0..=c);
    let mp = ComponentCode::new(
        inv.h_field.clone(),
        c,
        (0..kp)
            .map(|_| (0..c).map(|_| rng.gen_range(0..16) as u8).collect())
            .collect(),
    );
    let mpp = mp.dual(crate::compcodes::Ip::Euclidean).conj_map(inv.hs_field.clone());

    let mut rows = Vec::new();
    for part in [&m0, &m1, &m2, &mp, &mpp] {
        rows.extend_from_slice(part.binary_image().rows());
    }
    let code = BinaryCode::new(cs.n(), rows).unwrap();
    debug_assert!(code.is_self_dual());
    (code, cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcodes::inventory::Inventory;
    use crate::compcodes::{cases, sdenum, Ip};
    use crate::gf2core::random_self_dual;
    use crate::ringalg::factor_cyclic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn f2_field() -> Arc<ComponentField> {
        let fz = factor_cyclic(1).unwrap();
        let comp = fz.component_by_coset_rep(0).unwrap();
        Arc::new(ComponentField::new(1, comp).unwrap())
    }

    fn as_binary(code: &ComponentCode) -> BinaryCode {
        let rows = code
            .rows()
            .iter()
            .map(|row| row.iter().enumerate().fold(0u128, |w, (i, &b)| w | (b as u128) << i))
            .collect();
        BinaryCode::new(code.n(), rows).unwrap()
    }

    #[test]
    fn layouts_expose_the_expected_shape() {
        let f0 = CycleStructure::order15_f0();
        assert_eq!((f0.n(), f0.m(), f0.r()), (96, 8, 15));
        assert_eq!(f0.full_cycle_count(), 6);
        assert_eq!(f0.support(6), 90..93);
        assert_eq!(f0.permutation().order(), 15);
        assert_eq!(f0.automorphism_type(), None);

        let f6 = CycleStructure::order15_f6();
        assert_eq!((f6.n(), f6.m(), f6.r()), (96, 12, 15));
        assert_eq!(
            f6.automorphism_type(),
            Some(AutomorphismType { p: 15, c: 6, f: 6 })
        );

        let t3 = CycleStructure::type3_28_12();
        let ty = t3.automorphism_type().unwrap();
        assert_eq!((ty.p, ty.c, ty.f), (3, 28, 12));
        assert_eq!(ty.n(), 96);
        assert_eq!((ty.fixed_dim(), ty.even_dim()), (20, 28));

        // The block permutation really is the product of the block cycles.
        let cycles = f0.permutation().cycles();
        assert_eq!(cycles.len(), 8);
        for (i, cyc) in cycles.iter().enumerate() {
            assert_eq!(cyc.len(), f0.lengths()[i]);
            assert!(cyc.iter().all(|&p| f0.support(i).contains(&p)));
        }
    }

    #[test]
    fn normalization_transports_invariance() {
        let cs = CycleStructure::from_lengths(vec![5, 3, 3, 1]);
        let sigma = cs.permutation();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // Conjugate by a random relabeling, then recover a block layout.
        let shuffle = {
            let mut map: Vec<usize> = (0..cs.n()).collect();
            use rand::seq::SliceRandom;
            map.shuffle(&mut rng);
            Perm::from_map(map)
        };
        let scrambled = shuffle.inverse().then(&sigma).then(&shuffle);
        let (cs2, rho) = CycleStructure::normalize(&scrambled);
        assert_eq!(cs2.lengths(), &[5, 3, 3, 1]);
        assert_eq!(
            rho.inverse().then(&scrambled).then(&rho),
            cs2.permutation()
        );

        let code = invariant_closure(&cs, &[0b0_011_101_10101, 0b1_111_111_11111]);
        let moved = code.permuted(&shuffle);
        assert_eq!(&moved.permuted(&scrambled), &moved);
        let back = moved.permuted(&rho);
        let (f, e) = fixed_and_even_parts(&back, &cs2).unwrap();
        let (f0, e0) = fixed_and_even_parts(&code, &cs).unwrap();
        assert_eq!(f.k(), f0.k());
        assert_eq!(e.k(), e0.k());
    }

    #[test]
    fn identity_action_fixes_everything() {
        let cs = CycleStructure::from_lengths(vec![1; 10]);
        let code = random_self_dual(10, 7);
        let (f, e) = fixed_and_even_parts(&code, &cs).unwrap();
        assert_eq!(&f, &code);
        assert_eq!(e.k(), 0);
    }

    #[test]
    fn non_invariant_codes_are_rejected() {
        let cs = CycleStructure::from_lengths(vec![3, 1]);
        let code = BinaryCode::from_strings(&["1000"]);
        match fixed_and_even_parts(&code, &cs) {
            Err(DecompError::NotInvariant) => {}
            other => panic!("expected NotInvariant, got {other:?}"),
        }
    }

    #[test]
    fn splitting_law_verified_word_by_word() {
        let shapes: &[&[usize]] = &[
            &[3, 3, 1],
            &[5, 3, 1, 1],
            &[9, 3, 1],
            &[15, 5, 3, 1],
            &[7, 7, 1],
            &[15, 15],
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (si, shape) in shapes.iter().enumerate() {
            let cs = CycleStructure::from_lengths(shape.to_vec());
            let all_ones = low_mask(cs.n());
            let word: u128 = rng.gen::<u128>() & low_mask(cs.n());
            let code = invariant_closure(&cs, &[word, all_ones]);
            assert!(code.k() <= 17, "shape {si}: closure too big for full enumeration");
            let (f, e) = fixed_and_even_parts(&code, &cs).unwrap();
            assert_eq!(f.k() + e.k(), code.k(), "shape {si}");

            // Trivial intersection: stacking both bases keeps full rank.
            let mut stacked: Vec<u128> = f.rows().to_vec();
            stacked.extend_from_slice(e.rows());
            assert_eq!(crate::gf2core::rref(&mut stacked, cs.n()), f.k() + e.k());

            let sigma = cs.permutation();
            code.for_each_word(|v| {
                let w = trace_fixed(v, &cs);
                let u = v ^ w;
                assert!(f.contains(w));
                assert_eq!(sigma.apply_word(w), w);
                assert!(e.contains(u));
                for i in 0..cs.m() {
                    assert_eq!((u & cs.block_mask(i)).count_ones() % 2, 0);
                }
            });
        }
    }

    #[test]
    fn averaging_covers_the_fixed_part() {
        let cs = CycleStructure::from_lengths(vec![5, 5, 3, 1]);
        let code = invariant_closure(&cs, &[0b1_011_01011_00110, low_mask(14)]);
        let (f, _) = fixed_and_even_parts(&code, &cs).unwrap();
        let traces: Vec<u128> = code.rows().iter().map(|&g| trace_fixed(g, &cs)).collect();
        assert_eq!(&BinaryCode::new(cs.n(), traces).unwrap(), &f);
        // The averaging map is the identity on fixed words (odd order).
        for &row in f.rows() {
            assert_eq!(trace_fixed(row, &cs), row);
        }
    }

    #[test]
    fn projection_requires_constant_rows() {
        let cs = CycleStructure::from_lengths(vec![3, 3]);
        let ok = BinaryCode::from_strings(&["111000", "111111"]);
        let proj = project_pi(&ok, &cs).unwrap();
        assert_eq!(proj, BinaryCode::from_strings(&["10", "11"]));
        // The all-ones word projects to all ones.
        assert!(proj.contains(0b11));
        assert_eq!(pi_expand(&proj, &cs), ok);

        let bad = BinaryCode::from_strings(&["110000"]);
        match project_pi(&bad, &cs) {
            Err(DecompError::NotConstantOnCycle { row: 0, cycle: 0 }) => {}
            other => panic!("expected NotConstantOnCycle, got {other:?}"),
        }
    }

    #[test]
    fn preimage_weights_follow_block_lengths() {
        let f0 = CycleStructure::order15_f0();
        let f6 = CycleStructure::order15_f6();
        assert_eq!(preimage_weight(0, &f0), 0);
        // One 15-cycle plus both 3-cycles.
        assert_eq!(preimage_weight(0b1100_0001, &f0), 21);
        // One 15-cycle plus five fixed points.
        assert_eq!(preimage_weight(0b0111_1100_0001, &f6), 20);
        // Congruence mod 4: every block length is 3 mod 4 in this layout.
        for x in 0u128..256 {
            assert_eq!(
                preimage_weight(x, &f0) % 4,
                3 * (x.count_ones() as usize) % 4
            );
        }
    }

    /// Replicated distance >= 20 pins down the projected code: among all
    /// self-dual [8,4] codes only the extended-Hamming relabelings survive
    /// the f=0 block lengths, and among all self-dual [12,6] codes only
    /// one S6 x S6 class survives the f=6 lengths.
    #[test]
    fn fixed_templates_surviving_the_preimage_filter() {
        let inv = Inventory::get();
        let f2 = f2_field();

        let f0 = CycleStructure::order15_f0();
        let all8 = sdenum::hermitian_so_codes(&f2, 8, 4);
        assert_eq!(all8.len(), 135);
        let survivors: Vec<BinaryCode> = all8
            .iter()
            .map(as_binary)
            .filter(|c| {
                let mut min = usize::MAX;
                c.for_each_word(|w| {
                    if w != 0 {
                        min = min.min(preimage_weight(w, &f0));
                    }
                });
                min >= 20
            })
            .collect();
        assert_eq!(survivors.len(), 30);
        for s in &survivors {
            let wd = s.weight_distribution().unwrap();
            assert_eq!(wd.min_nonzero_weight(), Some(4));
        }
        assert!(survivors.iter().any(|s| s == &inv.e8));

        let f6 = CycleStructure::order15_f6();
        let all12 = sdenum::hermitian_so_codes(&f2, 12, 6);
        assert_eq!(all12.len(), 75735);
        let survivors: BTreeSet<Vec<u128>> = all12
            .iter()
            .map(as_binary)
            .filter(|c| {
                let mut min = usize::MAX;
                c.for_each_word(|w| {
                    if w != 0 {
                        min = min.min(preimage_weight(w, &f6));
                    }
                });
                min >= 20
            })
            .map(|c| c.rows().to_vec())
            .collect();

        // Orbit of the reference template under permutations preserving
        // the 15-cycle/fixed-point split.
        let mut orbit = BTreeSet::new();
        let mut queue = vec![inv.d12plus.clone()];
        orbit.insert(inv.d12plus.rows().to_vec());
        let mut moves = Vec::new();
        for i in (0..5).chain(6..11) {
            let mut map: Vec<usize> = (0..12).collect();
            map.swap(i, i + 1);
            moves.push(Perm::from_map(map));
        }
        while let Some(code) = queue.pop() {
            for mv in &moves {
                let next = code.permuted(mv);
                if orbit.insert(next.rows().to_vec()) {
                    queue.push(next);
                }
            }
        }
        assert_eq!(survivors, orbit);
    }

    #[test]
    fn huffman_dimensions_for_the_order_three_type() {
        let cs = CycleStructure::type3_28_12();
        let ty = cs.automorphism_type().unwrap();
        let fz3 = factor_cyclic(3).unwrap();
        let f4 = Arc::new(ComponentField::new(3, fz3.component_by_coset_rep(1).unwrap()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for seed in 0..3u64 {
            let pi_part = random_self_dual(40, 900 + seed);
            let even_part = random_hermitian_self_dual(&f4, 28, &mut rng);
            let mut rows: Vec<u128> = pi_expand(&pi_part, &cs).rows().to_vec();
            rows.extend_from_slice(even_part.binary_image().rows());
            let code = BinaryCode::new(96, rows).unwrap();
            assert!(code.is_self_dual());

            let (f, e) = fixed_and_even_parts(&code, &cs).unwrap();
            assert_eq!(f.k(), ty.fixed_dim());
            assert_eq!(e.k(), ty.even_dim());
            let proj = project_pi(&f, &cs).unwrap();
            assert!(proj.is_self_dual());
            assert_eq!(&proj, &pi_part);
        }
    }

    #[test]
    fn ring_image_roundtrip_and_ideal_spans() {
        let inv = Inventory::get();
        let cs = CycleStructure::uniform(15, 6, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rows: Vec<Vec<RingPoly>> = (0..5)
            .map(|_| {
                (0..6)
                    .map(|_| RingPoly::from_mask(15, rng.gen::<u64>() & 0x7fff))
                    .collect()
            })
            .collect();
        let b1 = phi_inverse(15, 6, &rows);
        let img = phi_map(&b1, &cs).unwrap();
        let b2 = phi_inverse(15, 6, img.rows());
        assert_eq!(b1, b2);

        // A single word over a degree-4 component spans four binary rows
        // whose joint support covers its blocks completely.
        let single = ComponentCode::new(
            inv.h_field.clone(),
            6,
            vec![vec![1, 3, 0, 0, 0, 0]],
        );
        let image = single.binary_image();
        assert_eq!(image.k(), 4);
        let support = image.rows().iter().fold(0u128, |acc, &w| acc | w);
        assert_eq!(support.count_ones(), 30);
        assert_eq!(support, low_mask(30));

        // Zero in, zero out.
        let zero = phi_inverse(15, 6, &[]);
        assert_eq!(zero.k(), 0);
        assert_eq!(phi_map(&zero, &cs).unwrap().rows().len(), 0);
    }

    #[test]
    fn quasicyclic_duality_through_the_ring_image() {
        let inv = Inventory::get();
        let g0 = g0_field();
        let cs = CycleStructure::uniform(15, 2, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let w1 = rng.gen::<u128>() & low_mask(30);
            let w2 = rng.gen::<u128>() & low_mask(30);
            let code = invariant_closure(&cs, &[w1, w2]);
            let dual = code.dual();
            let ic = phi_map(&code, &cs).unwrap();
            let id = phi_map(&dual, &cs).unwrap();

            for field in [&g0, &inv.g1_field, &inv.g2_field] {
                let a = id.component(field);
                let b = ic.component(field).dual(Ip::Hermitian);
                assert_eq!(a.rows(), b.rows());
            }
            let a = id.component(&inv.h_field);
            let b = ic
                .component(&inv.hs_field)
                .conj_map(inv.h_field.clone())
                .dual(Ip::Euclidean);
            assert_eq!(a.rows(), b.rows());
            let a = id.component(&inv.hs_field);
            let b = ic
                .component(&inv.h_field)
                .conj_map(inv.hs_field.clone())
                .dual(Ip::Euclidean);
            assert_eq!(a.rows(), b.rows());
        }
    }

    #[test]
    fn random_quasicyclic_self_dual_codes_check_out() {
        let inv = Inventory::get();
        for (c, seed) in [(2usize, 100u64), (2, 101), (4, 102)] {
            let (code, cs) = random_self_dual_quasicyclic(c, seed);
            assert_eq!(code.n(), 15 * c);
            assert_eq!(code.k(), 15 * c / 2);
            assert!(code.is_self_dual());
            assert_eq!(&code.permuted(&cs.permutation()), &code);

            let img = phi_map(&code, &cs).unwrap();
            assert!(img.is_hermitian_self_orthogonal());
            assert!(img.component(&inv.g1_field).is_hermitian_self_dual());
            assert!(img.component(&inv.g2_field).is_hermitian_self_dual());
            let mp = img.component(&inv.h_field);
            let mpp = img.component(&inv.hs_field);
            let expected = mp.dual(Ip::Euclidean).conj_map(inv.hs_field.clone());
            assert_eq!(mpp.rows(), expected.rows());

            // Tampering with the paired part breaks binary self-duality.
            if mp.k() > 0 && mp.k() < c {
                let mut rows = Vec::new();
                for part in [&img.component(&g0_field()), &img.component(&inv.g1_field), &img.component(&inv.g2_field), &mp, &mp.conj_map(inv.hs_field.clone())] {
                    rows.extend_from_slice(part.binary_image().rows());
                }
                let tampered = BinaryCode::new(15 * c, rows).unwrap();
                assert!(!tampered.is_self_dual());
            }
        }
    }

    #[test]
    fn assembled_f6_candidates_are_self_dual_and_decompose_back() {
        let inv = Inventory::get();
        let cs = CycleStructure::order15_f6();
        let mp = inv.case1_reps[0].clone();
        let mpp = cases::partner(inv, &mp);
        let parts = ComponentSet {
            m1: Some(inv.hexacode.clone()),
            m2: Some(inv.h1.clone()),
            mprime: Some(mp),
            mdouble: Some(mpp),
        };

        for gluing in [
            Gluing::identity(6, 12),
            Gluing {
                block_perm: vec![2, 0, 1, 5, 4, 3],
                shifts: vec![3, 0, 7, 1, 14, 5],
                frobenius: 2,
                template_perm: vec![4, 7, 0, 2, 11, 3, 6, 1, 5, 8, 10, 9],
            },
        ] {
            let asm = assemble(&cs, &parts, &inv.d12plus, &gluing).unwrap();
            assert_eq!(asm.code.n(), 96);
            assert_eq!(asm.code.k(), 48);
            assert!(asm.code.is_self_dual());

            let (f, e) = fixed_and_even_parts(&asm.code, &cs).unwrap();
            assert_eq!((f.k(), e.k()), (6, 42));
            let proj = project_pi(&f, &cs).unwrap();
            assert!(proj.is_self_dual());
            let tperm = Perm::from_map(gluing.template_perm.clone());
            assert_eq!(&proj, &inv.d12plus.permuted(&tperm));

            // The even part lives on the full cycles and carries exactly
            // the glued components.
            let estar = shorten_to_full_cycles(&e, &cs).unwrap();
            assert_eq!(estar.k(), 42);
            assert!(estar.k() <= dim_bound_check(&cs));
            let img = phi_map(&estar, &cs).unwrap();
            for (slot, field) in [
                (&parts.m1, &inv.g1_field),
                (&parts.m2, &inv.g2_field),
                (&parts.mprime, &inv.h_field),
                (&parts.mdouble, &inv.hs_field),
            ] {
                let glued = gluing.apply(slot.as_ref().unwrap());
                assert_eq!(img.component(field).rows(), glued.rows());
            }
        }
    }

    #[test]
    fn assembled_f0_candidate_matches_the_dimension_bookkeeping() {
        let inv = Inventory::get();
        let cs = CycleStructure::order15_f0();
        let mp = inv.case1_reps[1].clone();
        let mpp = cases::partner(inv, &mp);

        // No quaternary part: the [96, 36+4] stage.
        let parts = ComponentSet {
            m1: None,
            m2: Some(inv.h2.clone()),
            mprime: Some(mp.clone()),
            mdouble: Some(mpp.clone()),
        };
        let asm = assemble(&cs, &parts, &inv.e8, &Gluing::identity(6, 8)).unwrap();
        assert_eq!(asm.code.k(), 40);
        assert!(asm.code.is_self_orthogonal());
        let (f, e) = fixed_and_even_parts(&asm.code, &cs).unwrap();
        assert_eq!((f.k(), e.k()), (4, 36));
        assert_eq!(&project_pi(&f, &cs).unwrap(), &inv.e8);

        // Adding the quaternary part and an invariant self-orthogonal
        // piece on the 3-cycles completes a self-dual [96,48].
        let full_parts = ComponentSet { m1: Some(inv.i2cubed.clone()), ..parts };
        let asm = assemble(&cs, &full_parts, &inv.e8, &Gluing::identity(6, 8)).unwrap();
        assert_eq!(asm.code.k(), 46);
        let mut rows: Vec<u128> = asm.code.rows().to_vec();
        rows.push((0b011 << 90) | (0b011 << 93));
        rows.push((0b110 << 90) | (0b110 << 93));
        let code = BinaryCode::new(96, rows).unwrap();
        assert_eq!(code.k(), 48);
        assert!(code.is_self_dual());

        let (f, e) = fixed_and_even_parts(&code, &cs).unwrap();
        assert_eq!((f.k(), e.k()), (4, 44));
        assert_eq!(&project_pi(&f, &cs).unwrap(), &inv.e8);
        let estar = shorten_to_full_cycles(&e, &cs).unwrap();
        assert_eq!(estar.k(), 42);
        assert_eq!(estar.k(), dim_bound_check(&cs));
        let img = phi_map(&estar, &cs).unwrap();
        assert_eq!(img.component(&inv.g1_field).rows(), inv.i2cubed.rows());
        assert_eq!(img.component(&inv.g2_field).rows(), inv.h2.rows());
    }

    #[test]
    fn assembly_shape_errors_and_provenance() {
        let inv = Inventory::get();
        let cs = CycleStructure::order15_f6();
        let mp = inv.case1_reps[0].clone();
        let mpp = cases::partner(inv, &mp);
        let parts = ComponentSet {
            m1: None,
            m2: Some(inv.h1.clone()),
            mprime: Some(mp),
            mdouble: Some(mpp),
        };

        // Wrong template length for the layout.
        match assemble(&cs, &parts, &inv.e8, &Gluing::identity(6, 12)) {
            Err(DecompError::ShapeMismatch(_)) => {}
            other => panic!("expected ShapeMismatch, got {:?}", other.map(|a| a.code)),
        }
        // Gluing sized for a different layout.
        match assemble(&cs, &parts, &inv.d12plus, &Gluing::identity(6, 8)) {
            Err(DecompError::ShapeMismatch(_)) => {}
            other => panic!("expected ShapeMismatch, got {:?}", other.map(|a| a.code)),
        }
        // Component over the wrong length.
        let short = ComponentCode::new(inv.g2_field.clone(), 4, vec![vec![1, 0, 0, 1]]);
        let bad = ComponentSet { m2: Some(short), ..parts.clone() };
        match assemble(&cs, &bad, &inv.d12plus, &Gluing::identity(6, 12)) {
            Err(DecompError::ShapeMismatch(_)) => {}
            other => panic!("expected ShapeMismatch, got {:?}", other.map(|a| a.code)),
        }

        let asm = assemble(&cs, &parts, &inv.d12plus, &Gluing::identity(6, 12)).unwrap();
        let json = asm.to_json();
        let parsed: AssemblyDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, asm.descriptor);
        // The embedded matrix rebuilds the code verbatim.
        let rows: Vec<&str> =
            parsed.binary_generator_matrix.iter().map(|s| s.as_str()).collect();
        assert_eq!(BinaryCode::from_strings(&rows), asm.code);
        // Entries use the shift notation on components where x has full
        // order, and fall back to generator powers elsewhere.
        let hrows = &parsed.components.iter().find(|c| c.label == "M'").unwrap().rows;
        assert!(hrows.iter().flatten().all(|s| s == "0" || s.starts_with("x^")));
        let g2rows = &parsed.components.iter().find(|c| c.label == "M2").unwrap().rows;
        assert!(g2rows.iter().flatten().any(|s| s.starts_with("g^")));
    }

    #[test]
    fn shortening_and_support_violations() {
        let inv = Inventory::get();
        let f0 = CycleStructure::order15_f0();
        // A replicated template has support on the trailing cycles.
        let expanded = pi_expand(&inv.e8, &f0);
        match phi_map(&expanded, &f0) {
            Err(DecompError::SupportViolation { coord }) => assert!(coord >= 90),
            other => panic!("expected SupportViolation, got {:?}", other.map(|i| i.c())),
        }
        // Shortening keeps exactly the words that vanish on the tail.
        let shortened = shorten_to_full_cycles(&expanded, &f0).unwrap();
        assert_eq!(shortened.n(), 90);
        // e8 words vanishing on the last two coordinates form a dimension-2
        // subcode; its replication survives the shortening.
        assert_eq!(shortened.k(), 2);

        // Zero full cycles: nothing remains.
        let ones = CycleStructure::from_lengths(vec![1; 6]);
        assert_eq!(dim_bound_check(&ones), 0);
    }
}
