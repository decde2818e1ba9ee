//! Arithmetic in R = F2[x]/(x^r - 1) for odd r, and its decomposition
//! into field components.
//!
//! For odd r the modulus is squarefree, so R splits as a direct product
//! of finite fields, one per irreducible factor of x^r - 1, i.e. one per
//! 2-cyclotomic coset mod r. Each component is reached by a primitive
//! idempotent; multiplication by x acts on it as a field unit whose
//! order divides r.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("r = {r} must be odd (x^r - 1 squarefree)")]
    EvenR { r: usize },
    #[error("r = {r} out of supported range 1..=63")]
    ROutOfRange { r: usize },
    #[error("polynomial is not a factor of x^r - 1")]
    NotAFactor,
    #[error("component degree {degree} too large for table-based field")]
    DegreeTooLarge { degree: usize },
    #[error("element is not in the component")]
    NotInComponent,
    #[error("proposed generator does not have full multiplicative order")]
    NotAGenerator,
}

/// Polynomial over F2, bit i = coefficient of X^i. Degree < 128.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyGF2(pub u128);

impl std::fmt::Debug for PolyGF2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::fmt::Display for PolyGF2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for i in 0..128 {
            if self.0 >> i & 1 == 1 {
                if !first {
                    write!(f, "+")?;
                }
                match i {
                    0 => write!(f, "1")?,
                    1 => write!(f, "x")?,
                    _ => write!(f, "x^{i}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl PolyGF2 {
    pub const ZERO: PolyGF2 = PolyGF2(0);
    pub const ONE: PolyGF2 = PolyGF2(1);
    pub const X: PolyGF2 = PolyGF2(2);

    pub fn from_exps(exps: &[usize]) -> Self {
        PolyGF2(exps.iter().fold(0u128, |m, &e| m | (1 << e)))
    }

    pub fn deg(&self) -> i32 {
        127 - self.0.leading_zeros() as i32
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn add(self, other: Self) -> Self {
        PolyGF2(self.0 ^ other.0)
    }

    pub fn mul(self, other: Self) -> Self {
        if self.0 == 0 || other.0 == 0 {
            return PolyGF2(0);
        }
        assert!(self.deg() + other.deg() < 128, "product overflows 128 bits");
        let mut acc = 0u128;
        let mut a = self.0;
        let mut shift = 0;
        while a != 0 {
            let i = a.trailing_zeros();
            shift += i;
            acc ^= other.0 << shift;
            a >>= i + 1;
            shift += 1;
        }
        PolyGF2(acc)
    }

    pub fn div_rem(self, d: Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        let mut q = 0u128;
        let mut r = self.0;
        while r != 0 {
            let rd = 127 - r.leading_zeros() as i32;
            if rd < dd {
                break;
            }
            let s = (rd - dd) as u32;
            q |= 1u128 << s;
            r ^= d.0 << s;
        }
        (PolyGF2(q), PolyGF2(r))
    }

    pub fn rem(self, d: Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(self, other: Self) -> Self {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.rem(b);
            a = b;
            b = r;
        }
        a
    }

    /// Returns (g, s, t) with s*self + t*other = g = gcd.
    pub fn ext_gcd(self, other: Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self, other);
        let (mut s0, mut s1) = (PolyGF2::ONE, PolyGF2::ZERO);
        let (mut t0, mut t1) = (PolyGF2::ZERO, PolyGF2::ONE);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(r1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s0.add(q.mul(s1)));
            (t0, t1) = (t1, t0.add(q.mul(t1)));
        }
        (r0, s0, t0)
    }

    pub fn powmod(self, mut e: u64, m: Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = PolyGF2::ONE.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base).rem(m);
            }
            base = base.mul(base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn reciprocal(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let d = self.deg() as u32;
        let mut out = 0u128;
        for i in 0..=d {
            if self.0 >> i & 1 == 1 {
                out |= 1u128 << (d - i);
            }
        }
        PolyGF2(out)
    }
}

/// Element of F2[x]/(x^r - 1), r <= 63. Bit i = coefficient of x^i.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingPoly {
    r: usize,
    c: u64,
}

impl std::fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", PolyGF2(self.c as u128))
    }
}

impl std::fmt::Display for RingPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", PolyGF2(self.c as u128))
    }
}

impl RingPoly {
    pub fn zero(r: usize) -> Self {
        RingPoly { r, c: 0 }
    }

    pub fn one(r: usize) -> Self {
        RingPoly { r, c: 1 }
    }

    pub fn x(r: usize) -> Self {
        // x = 1 in the degenerate ring modulo x - 1.
        RingPoly { r, c: if r == 1 { 1 } else { 2 } }
    }

    pub fn from_exps(r: usize, exps: &[usize]) -> Self {
        let mut c = 0u64;
        for &e in exps {
            c |= 1 << (e % r);
        }
        RingPoly { r, c }
    }

    pub fn from_mask(r: usize, mask: u64) -> Self {
        assert!(mask >> r == 0);
        RingPoly { r, c: mask }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mask(&self) -> u64 {
        self.c
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.c >> (i % self.r) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.c == 0
    }

    pub fn weight(&self) -> u32 {
        self.c.count_ones()
    }

    pub fn add(self, other: Self) -> Self {
        assert_eq!(self.r, other.r);
        RingPoly { r: self.r, c: self.c ^ other.c }
    }

    /// Multiplication by x^i (cyclic shift of coefficients).
    pub fn shift(self, i: usize) -> Self {
        RingPoly { r: self.r, c: rot_left(self.c, i % self.r, self.r) }
    }

    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.r, other.r);
        let mut acc = 0u64;
        let mut b = other.c;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            acc ^= rot_left(self.c, i, self.r);
            b &= b - 1;
        }
        RingPoly { r: self.r, c: acc }
    }

    pub fn pow(self, e: usize) -> Self {
        let mut acc = RingPoly::one(self.r);
        let mut base = self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// The ring involution x -> x^(r-1), i.e. v(x) -> v(1/x).
    pub fn conj(self) -> Self {
        let mut c = 0u64;
        for i in 0..self.r {
            if self.c >> i & 1 == 1 {
                c |= 1 << ((self.r - i) % self.r);
            }
        }
        RingPoly { r: self.r, c }
    }

    pub fn to_poly(self) -> PolyGF2 {
        PolyGF2(self.c as u128)
    }

    pub fn from_poly(r: usize, p: PolyGF2) -> Self {
        let modulus = PolyGF2::from_exps(&[0, r]);
        RingPoly { r, c: p.rem(modulus).0 as u64 }
    }
}

fn mask_r(r: usize) -> u64 {
    if r == 64 { !0 } else { (1 << r) - 1 }
}

fn rot_left(c: u64, i: usize, r: usize) -> u64 {
    if i == 0 {
        c
    } else {
        ((c << i) | (c >> (r - i))) & mask_r(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReciprocalClass {
    SelfReciprocal,
    /// Index of the partner component in the factorization.
    PairedWith(usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Component {
    pub factor: PolyGF2,
    pub degree: usize,
    /// 2-cyclotomic coset of exponents whose roots this factor collects.
    pub coset: Vec<usize>,
    pub idempotent: RingPoly,
    /// Multiplicative order of x acting on the component.
    pub x_order: usize,
    pub reciprocal: ReciprocalClass,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicFactorization {
    pub r: usize,
    /// Ordered by smallest coset element; the coset {0} (factor x+1) first.
    pub components: Vec<Component>,
}

impl CyclicFactorization {
    pub fn component_by_coset_rep(&self, s: usize) -> Option<&Component> {
        self.components.iter().find(|c| c.coset[0] == s)
    }
}

fn cyclotomic_cosets(r: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for s in 0..r {
        if seen[s] {
            continue;
        }
        let mut coset = vec![];
        let mut j = s;
        loop {
            seen[j] = true;
            coset.push(j);
            j = j * 2 % r;
            if j == s {
                break;
            }
        }
        coset.sort_unstable();
        out.push(coset);
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// Berlekamp factorization, specialized to squarefree moduli.
fn berlekamp_squarefree(n: PolyGF2) -> Vec<PolyGF2> {
    let r = n.deg() as usize;
    if r == 1 {
        return vec![n];
    }
    // Rows of Q - I, where Q sends x^i to x^(2i) mod n.
    let rows: Vec<u128> = (0..r)
        .map(|i| PolyGF2::X.powmod(2 * i as u64, n).0 ^ (1u128 << i))
        .collect();
    let kernel = crate::gf2core::kernel_basis(&rows, r);
    let nfactors = kernel.len();
    let mut factors = vec![n];
    for &v in &kernel {
        if factors.len() == nfactors {
            break;
        }
        let vp = PolyGF2(v as u128);
        if vp == PolyGF2::ONE {
            continue;
        }
        let mut next = Vec::new();
        for f in factors {
            if factors_is_small(&f) {
                next.push(f);
                continue;
            }
            let g1 = f.gcd(vp.rem(f));
            if g1.deg() > 0 && g1.deg() < f.deg() {
                let (g2, rem) = f.div_rem(g1);
                debug_assert!(rem.is_zero());
                next.push(g1);
                next.push(g2);
            } else {
                let g1 = f.gcd(vp.add(PolyGF2::ONE).rem(f));
                if g1.deg() > 0 && g1.deg() < f.deg() {
                    let (g2, rem) = f.div_rem(g1);
                    debug_assert!(rem.is_zero());
                    next.push(g1);
                    next.push(g2);
                } else {
                    next.push(f);
                }
            }
        }
        factors = next;
    }
    assert_eq!(factors.len(), nfactors, "berlekamp split incomplete");
    factors.sort_by_key(|f| f.0);
    factors
}

fn factors_is_small(f: &PolyGF2) -> bool {
    f.deg() <= 1
}

/// Multiplicative order of x modulo the irreducible factor f, given that
/// it divides r.
fn x_order_mod(f: PolyGF2, r: usize) -> usize {
    if f == PolyGF2::from_exps(&[0, 1]) {
        return 1;
    }
    (1..=r)
        .filter(|d| r % d == 0)
        .find(|&d| PolyGF2::X.powmod(d as u64, f) == PolyGF2::ONE)
        .expect("x^r = 1 mod every factor")
}

/// Primitive idempotent of the component F2[x]/(factor) inside R.
pub fn idempotent_of(factor: PolyGF2, r: usize) -> Result<RingPoly, RingError> {
    let modulus = PolyGF2::from_exps(&[0, r]);
    let (h, rem) = modulus.div_rem(factor);
    if !rem.is_zero() {
        return Err(RingError::NotAFactor);
    }
    let (g, _s, t) = factor.ext_gcd(h);
    if g != PolyGF2::ONE {
        return Err(RingError::NotAFactor);
    }
    // t*h = 1 mod factor and 0 mod h: the identity of the component.
    let e = RingPoly::from_poly(r, t.mul(h));
    debug_assert_eq!(e.mul(e), e);
    Ok(e)
}

pub fn factor_cyclic(r: usize) -> Result<CyclicFactorization, RingError> {
    if r % 2 == 0 {
        return Err(RingError::EvenR { r });
    }
    if r == 0 || r > 63 {
        return Err(RingError::ROutOfRange { r });
    }
    let modulus = PolyGF2::from_exps(&[0, r]);
    let factors = berlekamp_squarefree(modulus);
    let cosets = cyclotomic_cosets(r);
    assert_eq!(factors.len(), cosets.len());

    // Label factors by coset: fix a root alpha of full order r, then the
    // factor for coset C_s is prod_{j in C_s} (X - alpha^j).
    let g_full = *factors
        .iter()
        .find(|f| x_order_mod(**f, r) == r)
        .expect("primitive r-th roots exist for odd r");
    let fq_mul = |a: PolyGF2, b: PolyGF2| a.mul(b).rem(g_full);
    let alpha_pow = |e: usize| PolyGF2::X.powmod(e as u64, g_full);

    let mut ordered: Vec<(Vec<usize>, PolyGF2)> = Vec::new();
    for coset in &cosets {
        if coset == &[0] {
            ordered.push((coset.clone(), PolyGF2::from_exps(&[0, 1])));
            continue;
        }
        // Coefficients live in F2[t]/g_full during the product.
        let mut coeffs: Vec<PolyGF2> = vec![PolyGF2::ONE];
        for &j in coset {
            let aj = alpha_pow(j);
            let mut next = vec![PolyGF2::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].add(fq_mul(c, aj));
            }
            coeffs = next;
        }
        let mut mask = 0u128;
        for (i, c) in coeffs.iter().enumerate() {
            match c.0 {
                0 => {}
                1 => mask |= 1 << i,
                _ => panic!("coset minimal polynomial must have F2 coefficients"),
            }
        }
        let minpoly = PolyGF2(mask);
        assert!(factors.contains(&minpoly), "minpoly must be one of the factors");
        ordered.push((coset.clone(), minpoly));
    }

    let mut components: Vec<Component> = ordered
        .iter()
        .map(|(coset, f)| {
            Ok(Component {
                factor: *f,
                degree: coset.len(),
                coset: coset.clone(),
                idempotent: idempotent_of(*f, r)?,
                x_order: x_order_mod(*f, r),
                reciprocal: ReciprocalClass::SelfReciprocal, // fixed below
            })
        })
        .collect::<Result<_, RingError>>()?;

    let recips: Vec<PolyGF2> = components.iter().map(|c| c.factor.reciprocal()).collect();
    for i in 0..components.len() {
        if recips[i] == components[i].factor {
            components[i].reciprocal = ReciprocalClass::SelfReciprocal;
        } else {
            let j = components
                .iter()
                .position(|c| c.factor == recips[i])
                .expect("reciprocal of a factor is a factor");
            components[i].reciprocal = ReciprocalClass::PairedWith(j);
        }
    }

    Ok(CyclicFactorization { r, components })
}

/// Table-backed arithmetic for one field component of R.
///
/// Elements are indexed 0 = zero and i = generator^(i-1) * e for i >= 1,
/// so multiplication is addition of discrete logs.
#[derive(Clone, Debug)]
pub struct ComponentField {
    pub r: usize,
    pub component: Component,
    q: usize,
    elements: Vec<RingPoly>,
    add_tab: Vec<u8>,
    conj_tab: Option<Vec<u8>>,
    x_idx: u8,
    pub generator: RingPoly,
}

impl ComponentField {
    /// Default generator: the element of full multiplicative order with
    /// the smallest coefficient mask, a deterministic convention.
    pub fn new(r: usize, component: &Component) -> Result<Self, RingError> {
        let e = component.idempotent;
        let dim = component.degree;
        let qm1 = (1usize << dim) - 1;
        let mut best: Option<u64> = None;
        for m in 1u64..(1 << dim) {
            let mut v = RingPoly::zero(r);
            for i in 0..dim {
                if m >> i & 1 == 1 {
                    v = v.add(e.shift(i));
                }
            }
            if v.is_zero() {
                continue;
            }
            if elem_order(v, e) == qm1 && best.map_or(true, |b| v.mask() < b) {
                best = Some(v.mask());
            }
        }
        let gen = RingPoly::from_mask(r, best.expect("field has a primitive element"));
        Self::with_generator(r, component, gen)
    }

    /// Pins an explicit generator (the tables in the reports use fixed
    /// conventional generators, so outputs stay byte-stable).
    pub fn with_generator(
        r: usize,
        component: &Component,
        generator: RingPoly,
    ) -> Result<Self, RingError> {
        let dim = component.degree;
        if dim > 8 {
            return Err(RingError::DegreeTooLarge { degree: dim });
        }
        let e = component.idempotent;
        if generator.mul(e) != generator {
            return Err(RingError::NotInComponent);
        }
        let q = 1usize << dim;
        if elem_order(generator, e) != q - 1 {
            return Err(RingError::NotAGenerator);
        }
        let mut elements = vec![RingPoly::zero(r), e];
        for _ in 2..q {
            let prev = *elements.last().unwrap();
            elements.push(prev.mul(generator));
        }
        let index_of = |v: RingPoly| -> u8 {
            elements
                .iter()
                .position(|&w| w == v)
                .expect("closed under addition") as u8
        };
        let mut add_tab = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add_tab[a * q + b] = index_of(elements[a].add(elements[b]));
            }
        }
        let conj_tab = match component.reciprocal {
            ReciprocalClass::SelfReciprocal => {
                Some((0..q).map(|a| index_of(elements[a].conj())).collect())
            }
            ReciprocalClass::PairedWith(_) => None,
        };
        let x_idx = index_of(RingPoly::x(r).mul(e));
        Ok(ComponentField {
            r,
            component: component.clone(),
            q,
            elements,
            add_tab,
            conj_tab,
            x_idx,
            generator,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.component.degree
    }

    pub fn element(&self, idx: u8) -> RingPoly {
        self.elements[idx as usize]
    }

    pub fn index_of(&self, v: RingPoly) -> Option<u8> {
        self.elements.iter().position(|&w| w == v).map(|i| i as u8)
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_tab[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            let qm1 = self.q - 1;
            (1 + (a as usize - 1 + b as usize - 1) % qm1) as u8
        }
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        let qm1 = self.q - 1;
        (1 + (qm1 - (a as usize - 1) % qm1) % qm1) as u8
    }

    pub fn pow(&self, a: u8, e: usize) -> u8 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let qm1 = self.q - 1;
        (1 + ((a as usize - 1) * e) % qm1) as u8
    }

    /// Discrete log base the generator; None for zero.
    pub fn dlog(&self, a: u8) -> Option<usize> {
        (a != 0).then(|| a as usize - 1)
    }

    pub fn from_dlog(&self, d: usize) -> u8 {
        (1 + d % (self.q - 1)) as u8
    }

    /// Conjugation within a self-reciprocal component.
    pub fn conj(&self, a: u8) -> u8 {
        self.conj_tab.as_ref().expect("conj stays inside only for self-reciprocal components")
            [a as usize]
    }

    pub fn frobenius(&self, a: u8) -> u8 {
        self.mul(a, a)
    }

    /// Index of x * e: the action of the cycle shift on this component.
    pub fn x_index(&self) -> u8 {
        self.x_idx
    }

    /// Conjugate of an element, landing in `target` (the paired component
    /// for non-self-reciprocal factors).
    pub fn conj_into(&self, target: &ComponentField, a: u8) -> u8 {
        target
            .index_of(self.elements[a as usize].conj())
            .expect("conjugation maps the component onto its pair")
    }

    /// Binary weight of the ring representative.
    pub fn weight(&self, a: u8) -> u32 {
        self.elements[a as usize].weight()
    }
}

fn elem_order(v: RingPoly, identity: RingPoly) -> usize {
    let mut cur = v;
    let mut ord = 1;
    while cur != identity {
        cur = cur.mul(v);
        ord += 1;
        if ord > 1 << 16 {
            panic!("element order runaway; not in a field component?");
        }
    }
    ord
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_basics() {
        let f = PolyGF2::from_exps(&[0, 1, 4]); // 1 + x + x^4
        let g = PolyGF2::from_exps(&[0, 3, 4]);
        assert_eq!(f.reciprocal(), g);
        assert_eq!(f.mul(g).deg(), 8);
        let (q, r) = f.mul(g).div_rem(f);
        assert_eq!(q, g);
        assert!(r.is_zero());
        let (gcd, s, t) = f.ext_gcd(g);
        assert_eq!(gcd, PolyGF2::ONE);
        assert_eq!(s.mul(f).add(t.mul(g)), PolyGF2::ONE);
    }

    #[test]
    fn ring_mul_and_conj() {
        let r = 15;
        let a = RingPoly::from_exps(r, &[1]);
        assert_eq!(a.pow(15), RingPoly::one(r));
        assert_eq!(a.conj(), RingPoly::from_exps(r, &[14]));
        let b = RingPoly::from_exps(r, &[0, 3, 7]);
        assert_eq!(a.mul(b), RingPoly::from_exps(r, &[1, 4, 8]));
        assert_eq!(b.conj().conj(), b);
    }

    #[test]
    fn factorization_of_x15_minus_1() {
        let fac = factor_cyclic(15).unwrap();
        let got: Vec<(Vec<usize>, PolyGF2, usize)> = fac
            .components
            .iter()
            .map(|c| (c.coset.clone(), c.factor, c.x_order))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![0], PolyGF2::from_exps(&[0, 1]), 1),
                (vec![1, 2, 4, 8], PolyGF2::from_exps(&[0, 1, 4]), 15),
                (vec![3, 6, 9, 12], PolyGF2::from_exps(&[0, 1, 2, 3, 4]), 5),
                (vec![5, 10], PolyGF2::from_exps(&[0, 1, 2]), 3),
                (vec![7, 11, 13, 14], PolyGF2::from_exps(&[0, 3, 4]), 15),
            ]
        );
        // h and h* are a reciprocal pair; the rest are self-reciprocal.
        assert_eq!(fac.components[1].reciprocal, ReciprocalClass::PairedWith(4));
        assert_eq!(fac.components[4].reciprocal, ReciprocalClass::PairedWith(1));
        assert_eq!(fac.components[0].reciprocal, ReciprocalClass::SelfReciprocal);
        assert_eq!(fac.components[2].reciprocal, ReciprocalClass::SelfReciprocal);
        assert_eq!(fac.components[3].reciprocal, ReciprocalClass::SelfReciprocal);
    }

    #[test]
    fn idempotents_of_r15() {
        let fac = factor_cyclic(15).unwrap();
        let idem: Vec<RingPoly> = fac.components.iter().map(|c| c.idempotent).collect();
        assert_eq!(idem[0], RingPoly::from_exps(15, &(0..15).collect::<Vec<_>>()));
        assert_eq!(
            idem[1], // identity of the h-component
            RingPoly::from_exps(15, &[1, 2, 3, 4, 6, 8, 9, 12])
        );
        assert_eq!(
            idem[2], // identity of the quintic component
            RingPoly::from_exps(15, &[1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14])
        );
        assert_eq!(
            idem[3], // identity of the quadratic component
            RingPoly::from_exps(15, &[1, 2, 4, 5, 7, 8, 10, 11, 13, 14])
        );
        assert_eq!(
            idem[4], // identity of the h*-component
            RingPoly::from_exps(15, &[3, 6, 7, 9, 11, 12, 13, 14])
        );
        // Orthogonal decomposition of 1.
        let sum = idem.iter().fold(RingPoly::zero(15), |a, &b| a.add(b));
        assert_eq!(sum, RingPoly::one(15));
        for i in 0..idem.len() {
            assert_eq!(idem[i].mul(idem[i]), idem[i]);
            for j in i + 1..idem.len() {
                assert!(idem[i].mul(idem[j]).is_zero());
            }
        }
        // Conjugation swaps the h and h* identities.
        assert_eq!(idem[1].conj(), idem[4]);
    }

    #[test]
    fn small_odd_r_factorizations_are_consistent() {
        for r in [1usize, 3, 5, 7, 9, 11, 13, 17, 21, 23, 31, 33, 45, 63] {
            let fac = factor_cyclic(r).unwrap();
            let product = fac
                .components
                .iter()
                .fold(PolyGF2::ONE, |acc, c| acc.mul(c.factor));
            assert_eq!(product, PolyGF2::from_exps(&[0, r]), "r = {r}");
            assert_eq!(
                fac.components.iter().map(|c| c.degree).sum::<usize>(),
                r
            );
            let sum = fac
                .components
                .iter()
                .fold(RingPoly::zero(r), |a, c| a.add(c.idempotent));
            assert_eq!(sum, RingPoly::one(r), "r = {r}");
            for c in &fac.components {
                assert_eq!(r % c.x_order, 0);
                assert_eq!(c.degree, c.coset.len());
                assert_eq!(c.idempotent.mul(c.idempotent), c.idempotent);
            }
        }
    }

    #[test]
    fn rejects_even_and_oversized_r() {
        assert!(matches!(factor_cyclic(6), Err(RingError::EvenR { r: 6 })));
        assert!(matches!(factor_cyclic(65), Err(RingError::ROutOfRange { .. })));
    }

    fn g2_field() -> ComponentField {
        let fac = factor_cyclic(15).unwrap();
        let comp = fac.component_by_coset_rep(3).unwrap();
        // Conventional generator pinned for stable table output.
        let mu2 = RingPoly::from_exps(15, &[0, 1, 5, 6, 10, 11]);
        ComponentField::with_generator(15, comp, mu2).unwrap()
    }

    #[test]
    fn g2_generator_facts() {
        let g2 = g2_field();
        assert_eq!(g2.q(), 16);
        // x acts as the 12th power of the pinned generator (order 5).
        assert_eq!(g2.dlog(g2.x_index()), Some(12));
        // Conjugation is the squared Frobenius: mu2 -> mu2^4.
        let mu2_idx = g2.from_dlog(1);
        assert_eq!(g2.conj(mu2_idx), g2.from_dlog(4));
        // Binary weights: cubes weigh 12, the rest weigh 6.
        for d in 0..15 {
            let idx = g2.from_dlog(d);
            assert_eq!(g2.weight(idx), if d % 3 == 0 { 12 } else { 6 });
        }
    }

    #[test]
    fn g1_field_facts() {
        let fac = factor_cyclic(15).unwrap();
        let comp = fac.component_by_coset_rep(5).unwrap();
        let g1 = ComponentField::new(15, comp).unwrap();
        assert_eq!(g1.q(), 4);
        // x has order 3 here, so x*e generates.
        assert_eq!(elem_order(g1.element(g1.x_index()), comp.idempotent), 3);
        for a in 1..4u8 {
            assert_eq!(g1.weight(a), 10);
        }
        // Conjugation is the only nontrivial automorphism of F4.
        for a in 1..4u8 {
            assert_eq!(g1.conj(a), g1.frobenius(a));
        }
    }

    #[test]
    fn h_field_facts() {
        let fac = factor_cyclic(15).unwrap();
        let h = ComponentField::new(15, fac.component_by_coset_rep(1).unwrap()).unwrap();
        let hs = ComponentField::new(15, fac.component_by_coset_rep(7).unwrap()).unwrap();
        assert_eq!(h.q(), 16);
        // x has full order 15: per-coordinate shifts realize all scalings.
        assert_eq!(elem_order(h.element(h.x_index()), h.component.idempotent), 15);
        for a in 1..16u8 {
            assert_eq!(h.weight(a), 8);
        }
        // Conjugation maps H onto H*.
        for a in 0..16u8 {
            let b = h.conj_into(&hs, a);
            assert_eq!(hs.element(b), h.element(a).conj());
        }
    }

    #[test]
    fn field_arithmetic_identities() {
        let g2 = g2_field();
        for a in 0..16u8 {
            assert_eq!(g2.add(a, a), 0);
            assert_eq!(g2.mul(a, 1), a);
            if a != 0 {
                assert_eq!(g2.mul(a, g2.inv(a)), 1);
            }
            for b in 0..16u8 {
                assert_eq!(g2.add(a, b), g2.add(b, a));
                assert_eq!(g2.mul(a, b), g2.mul(b, a));
                for c in 0..16u8 {
                    assert_eq!(g2.mul(a, g2.add(b, c)), g2.add(g2.mul(a, b), g2.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn default_generator_rule_is_lex_min() {
        let fac = factor_cyclic(15).unwrap();
        let comp = fac.component_by_coset_rep(1).unwrap();
        let f = ComponentField::new(15, comp).unwrap();
        // Check minimality directly against a scan.
        let e = comp.idempotent;
        let mut best = u64::MAX;
        for m in 1u64..16 {
            let mut v = RingPoly::zero(15);
            for i in 0..4 {
                if m >> i & 1 == 1 {
                    v = v.add(e.shift(i));
                }
            }
            if !v.is_zero() && elem_order(v, e) == 15 {
                best = best.min(v.mask());
            }
        }
        assert_eq!(f.generator.mask(), best);
    }
}
