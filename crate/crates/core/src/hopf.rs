//! U_q sl₂ in the PBW basis `F^a K^b E^c`, its Hopf *-structure, the Casimir
//! element, and the covariant action on Pol(ℂ)_q.
//!
//! Relations: `KE = q²EK`, `KF = q⁻²FK`, `EF − FE = (K − K⁻¹)/(q − q⁻¹)`.
//! Coproduct: `Δ(E) = E⊗1 + K⊗E`, `Δ(F) = F⊗K⁻¹ + 1⊗F`, `Δ(K) = K⊗K`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::polalg::PolElement;
use crate::scalar::ExactScalar;

/// The PBW monomial `F^f K^k E^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pbw {
    pub f: u32,
    pub k: i32,
    pub e: u32,
}

impl Pbw {
    pub const ONE: Pbw = Pbw { f: 0, k: 0, e: 0 };

    pub fn new(f: u32, k: i32, e: u32) -> Self {
        Pbw { f, k, e }
    }
}

impl fmt::Display for Pbw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pbw_str(*self))
    }
}

fn pbw_str(m: Pbw) -> String {
    let mut parts = Vec::new();
    match m.f {
        0 => {}
        1 => parts.push("F".to_string()),
        n => parts.push(format!("F^{n}")),
    }
    match m.k {
        0 => {}
        1 => parts.push("K".to_string()),
        -1 => parts.push("Kinv".to_string()),
        n if n > 0 => parts.push(format!("K^{n}")),
        n => parts.push(format!("Kinv^{}", -n)),
    }
    match m.e {
        0 => {}
        1 => parts.push("E".to_string()),
        n => parts.push(format!("E^{n}")),
    }
    parts.join("*")
}

/// A linear combination of PBW monomials; no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct UqElement {
    terms: BTreeMap<Pbw, ExactScalar>,
}

impl UqElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(c: ExactScalar) -> Self {
        Self::monomial(Pbw::ONE, c)
    }

    pub fn monomial(m: Pbw, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UqElement { terms }
    }

    pub fn pbw(f: u32, k: i32, e: u32) -> Self {
        Self::monomial(Pbw::new(f, k, e), ExactScalar::one())
    }

    pub fn e() -> Self {
        Self::pbw(0, 0, 1)
    }

    pub fn f() -> Self {
        Self::pbw(1, 0, 0)
    }

    pub fn k() -> Self {
        Self::pbw(0, 1, 0)
    }

    pub fn kinv() -> Self {
        Self::pbw(0, -1, 0)
    }

    pub fn k_pow(n: i32) -> Self {
        Self::pbw(0, n, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (Pbw, ExactScalar)>>(it: I) -> Self {
        let mut x = Self::zero();
        for (m, c) in it {
            x.add_term(m, &c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pbw, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Pbw) -> ExactScalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn as_scalar(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&Pbw::ONE).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Pbw, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UqElement { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        uq_mul(self, other)
    }

    /// `F · x`.
    fn left_mul_f(&self) -> Self {
        UqElement { terms: self.terms.iter().map(|(m, c)| (Pbw { f: m.f + 1, ..*m }, c.clone())).collect() }
    }

    /// `K^n · x`, using `K^n F^a = q^(−2na) F^a K^n`.
    fn left_mul_k(&self, n: i32) -> Self {
        if n == 0 {
            return self.clone();
        }
        UqElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let w = ExactScalar::q_pow(-2 * n as i64 * m.f as i64);
                    (Pbw { k: m.k + n, ..*m }, c * &w)
                })
                .collect(),
        }
    }

    /// `E · x`, using `E F^a = F^a E + F^(a−1) Σ_{n<a} (q^(−2n)K − q^(2n)K⁻¹)/(q − q⁻¹)`
    /// and `E K^b = q^(−2b) K^b E`.
    fn left_mul_e(&self) -> Self {
        let qq = ExactScalar::q() - ExactScalar::q_pow(-1);
        let mut r = UqElement::zero();
        for (m, c) in &self.terms {
            r.add_term(Pbw { e: m.e + 1, ..*m }, &(c * &ExactScalar::q_pow(-2 * m.k as i64)));
            if m.f > 0 {
                let down = geometric(m.f, -4);
                let up = geometric(m.f, 4);
                let base = Pbw { f: m.f - 1, ..*m };
                r.add_term(Pbw { k: m.k + 1, ..base }, &(c * &down / &qq));
                r.add_term(Pbw { k: m.k - 1, ..base }, &(-(c * &up / &qq)));
            }
        }
        r
    }
}

/// `Σ_{i=0}^{n−1} s^(step·i)` with `s = q^(1/2)`.
pub(crate) fn geometric(n: u32, step: i64) -> ExactScalar {
    (0..n as i64).map(|i| ExactScalar::q_half_pow(step * i)).sum()
}

/// Product in U_q sl₂, straightened to PBW form.
pub fn uq_mul(x: &UqElement, y: &UqElement) -> UqElement {
    let mut r = UqElement::zero();
    for (m, c) in &x.terms {
        let mut t = y.clone();
        for _ in 0..m.e {
            t = t.left_mul_e();
        }
        t = t.left_mul_k(m.k);
        for _ in 0..m.f {
            t = t.left_mul_f();
        }
        for (mm, cc) in &t.terms {
            r.add_term(*mm, &(cc * c));
        }
    }
    r
}

fn uq_pow(x: &UqElement, n: u32) -> UqElement {
    (0..n).fold(UqElement::one(), |acc, _| uq_mul(&acc, x))
}

/// Element of `U_q sl₂ ⊗ U_q sl₂`, both legs in PBW form.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TensorUq {
    terms: BTreeMap<(Pbw, Pbw), ExactScalar>,
}

impl TensorUq {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::simple(&UqElement::one(), &UqElement::one())
    }

    /// `x ⊗ y`.
    pub fn simple(x: &UqElement, y: &UqElement) -> Self {
        let mut t = Self::zero();
        for (a, c) in &x.terms {
            for (b, d) in &y.terms {
                t.add_term((*a, *b), &(c * d));
            }
        }
        t
    }

    fn add_term(&mut self, key: (Pbw, Pbw), c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &other.terms {
            r.add_term(*k, c);
        }
        r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Pbw, Pbw), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Legwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let left = uq_mul(&UqElement::pbw(a.f, a.k, a.e), &UqElement::pbw(c.f, c.k, c.e));
                let right = uq_mul(&UqElement::pbw(b.f, b.k, b.e), &UqElement::pbw(d.f, d.k, d.e));
                let xy = x * y;
                for (l, lc) in &left.terms {
                    for (rr, rc) in &right.terms {
                        r.add_term((*l, *rr), &(&xy * &(lc * rc)));
                    }
                }
            }
        }
        r
    }

    /// `Σ f(x₁) ⊗ g(x₂)`.
    pub fn map_legs(&self, f: impl Fn(&UqElement) -> UqElement, g: impl Fn(&UqElement) -> UqElement) -> Self {
        let mut r = Self::zero();
        for ((a, b), c) in &self.terms {
            let t =
                Self::simple(&f(&UqElement::monomial(*a, c.clone())), &g(&UqElement::monomial(*b, ExactScalar::one())));
            r = r.add(&t);
        }
        r
    }

    /// The multiplication map `x ⊗ y ↦ xy`.
    pub fn multiply(&self) -> UqElement {
        let mut r = UqElement::zero();
        for ((a, b), c) in &self.terms {
            let p = uq_mul(&UqElement::monomial(*a, c.clone()), &UqElement::monomial(*b, ExactScalar::one()));
            r = r.add(&p);
        }
        r
    }
}

impl fmt::Debug for TensorUq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|((a, b), c)| format!("({c})*[{}]⊗[{}]", pbw_str(*a), pbw_str(*b))).collect();
        write!(f, "TensorUq({})", parts.join(" + "))
    }
}

fn tensor_pow(t: &TensorUq, n: u32) -> TensorUq {
    (0..n).fold(TensorUq::one(), |acc, _| acc.mul(t))
}

/// `Δ(x)`, extended from the generators as an algebra morphism.
pub fn coproduct(x: &UqElement) -> TensorUq {
    let de =
        TensorUq::simple(&UqElement::e(), &UqElement::one()).add(&TensorUq::simple(&UqElement::k(), &UqElement::e()));
    let df = TensorUq::simple(&UqElement::f(), &UqElement::kinv())
        .add(&TensorUq::simple(&UqElement::one(), &UqElement::f()));
    let mut r = TensorUq::zero();
    for (m, c) in &x.terms {
        let dk = TensorUq::simple(&UqElement::k_pow(m.k), &UqElement::k_pow(m.k));
        let t = tensor_pow(&df, m.f).mul(&dk).mul(&tensor_pow(&de, m.e));
        for (key, v) in &t.terms {
            r.add_term(*key, &(v * c));
        }
    }
    r
}

/// `S(x)`, the antipode: `S(E) = −K⁻¹E`, `S(F) = −FK`, `S(K^±1) = K^∓1`, antimultiplicative.
pub fn antipode(x: &UqElement) -> UqElement {
    let se = UqElement::kinv().mul(&UqElement::e()).scale(&ExactScalar::from_int(-1));
    let sf = UqElement::f().mul(&UqElement::k()).scale(&ExactScalar::from_int(-1));
    let mut r = UqElement::zero();
    for (m, c) in &x.terms {
        let t = uq_mul(&uq_mul(&uq_pow(&se, m.e), &UqElement::k_pow(-m.k)), &uq_pow(&sf, m.f));
        r = r.add(&t.scale(c));
    }
    r
}

/// `ε(x)`: the coefficient of the `K^b` terms, each counted with `ε(K^b) = 1`.
pub fn counit(x: &UqElement) -> ExactScalar {
    x.terms.iter().filter(|(m, _)| m.f == 0 && m.e == 0).map(|(_, c)| c.clone()).sum()
}

/// `(S(x), ε(x))`.
pub fn antipode_counit(x: &UqElement) -> (UqElement, ExactScalar) {
    (antipode(x), counit(x))
}

/// The *-structure of U_q su(1,1): `E* = −KF`, `F* = −EK⁻¹`, `K* = K`, antimultiplicative;
/// scalars are real, so coefficients are fixed.
pub fn star_uq(x: &UqElement) -> UqElement {
    let es = UqElement::k().mul(&UqElement::f()).scale(&ExactScalar::from_int(-1));
    let fs = UqElement::e().mul(&UqElement::kinv()).scale(&ExactScalar::from_int(-1));
    let mut r = UqElement::zero();
    for (m, c) in &x.terms {
        let t = uq_mul(&uq_mul(&uq_pow(&es, m.e), &UqElement::k_pow(m.k)), &uq_pow(&fs, m.f));
        r = r.add(&t.scale(c));
    }
    r
}

/// The Casimir element `Ω = FE + (q⁻¹K⁻¹ + qK − (q⁻¹ + q))/(q⁻¹ − q)²`.
pub fn casimir() -> UqElement {
    let qi = ExactScalar::q_pow(-1);
    let q = ExactScalar::q();
    let d = (&qi - &q).pow(2).expect("nonnegative power");
    UqElement::from_terms([
        (Pbw::new(1, 0, 1), ExactScalar::one()),
        (Pbw::new(0, -1, 0), &qi / &d),
        (Pbw::new(0, 1, 0), &q / &d),
        (Pbw::ONE, -(&(&qi + &q) / &d)),
    ])
}

/// A U_q sl₂-module whose elements the generators act on linearly.
pub trait UqModule: Sized {
    fn act_e(&self) -> Self;
    fn act_f(&self) -> Self;
    /// `K^n`.
    fn act_k(&self, n: i32) -> Self;
    fn scale(&self, c: &ExactScalar) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn zero() -> Self;
}

/// Action of `x` on `v`: PBW monomials act by composition, rightmost factor first.
pub fn act<M: UqModule>(x: &UqElement, v: &M) -> M {
    let mut r = M::zero();
    // E-powers of v, shared across terms
    let top = x.terms.keys().map(|m| m.e).max().unwrap_or(0);
    let mut e_pows = vec![v.scale(&ExactScalar::one())];
    for i in 0..top as usize {
        let next = e_pows[i].act_e();
        e_pows.push(next);
    }
    for (m, c) in &x.terms {
        let mut t = e_pows[m.e as usize].act_k(m.k);
        for _ in 0..m.f {
            t = t.act_f();
        }
        r = r.add(&t.scale(c));
    }
    r
}

/// Closed-form generator actions on monomials of Pol(ℂ)_q, derived from
/// `Ez = −q^(1/2)z²`, `Ez* = q^(−3/2)`, `Fz = q^(1/2)`, `Fz* = −q^(5/2)z*²`,
/// `K^(±1)z = q^(±2)z`, `K^(±1)z* = q^(∓2)z*` and the twisted Leibniz rules.
pub(crate) mod coeffs {
    use super::geometric;
    use crate::scalar::ExactScalar;

    /// `E(z^j) = e_z(j) · z^(j+1)`.
    pub fn e_z(j: u32) -> ExactScalar {
        -(ExactScalar::q_half_pow(1) * geometric(j, 4))
    }

    /// `E(z*^k) = e_zs(k) · z*^(k−1)`.
    pub fn e_zs(k: u32) -> ExactScalar {
        ExactScalar::q_half_pow(-3) * geometric(k, -4)
    }

    /// `F(z^j) = f_z(j) · z^(j−1)`.
    pub fn f_z(j: u32) -> ExactScalar {
        ExactScalar::q_half_pow(1) * geometric(j, -4)
    }

    /// `F(z*^k) = f_zs(k) · z*^(k+1)`.
    pub fn f_zs(k: u32) -> ExactScalar {
        -(ExactScalar::q_half_pow(5) * geometric(k, 4))
    }

    /// Eigenvalue of `K^n` on a vector of degree `2(j − k)`.
    pub fn k_weight(n: i32, j: u32, k: u32) -> ExactScalar {
        ExactScalar::q_pow(2 * n as i64 * (j as i64 - k as i64))
    }
}

impl UqModule for PolElement {
    fn act_e(&self) -> Self {
        // E(z^j z*^k) = E(z^j) z*^k + K(z^j) E(z*^k)
        let mut r = PolElement::zero();
        for (&(j, k), c) in self.terms() {
            r.add_term(j + 1, k, &(c * &coeffs::e_z(j)));
            if k > 0 {
                r.add_term(j, k - 1, &(c * &(ExactScalar::q_pow(2 * j as i64) * coeffs::e_zs(k))));
            }
        }
        r
    }

    fn act_f(&self) -> Self {
        // F(z^j z*^k) = F(z^j) K⁻¹(z*^k) + z^j F(z*^k)
        let mut r = PolElement::zero();
        for (&(j, k), c) in self.terms() {
            if j > 0 {
                r.add_term(j - 1, k, &(c * &(coeffs::f_z(j) * ExactScalar::q_pow(2 * k as i64))));
            }
            r.add_term(j, k + 1, &(c * &coeffs::f_zs(k)));
        }
        r
    }

    fn act_k(&self, n: i32) -> Self {
        PolElement::from_terms(self.terms().map(|(&(j, k), c)| ((j, k), c * &coeffs::k_weight(n, j, k))))
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        PolElement::scale(self, c)
    }

    fn add(&self, other: &Self) -> Self {
        PolElement::add(self, other)
    }

    fn zero() -> Self {
        PolElement::zero()
    }
}

/// The covariant action of U_q sl₂ on Pol(ℂ)_q.
pub fn act_pol(x: &UqElement, f: &PolElement) -> PolElement {
    act(x, f)
}

/// Printer order: descending `E`+`F` degree, then `F`, then `K` power.
fn uq_print_order(a: &Pbw, b: &Pbw) -> std::cmp::Ordering {
    (b.f + b.e, b.f, b.k).cmp(&(a.f + a.e, a.f, a.k))
}

impl fmt::Display for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| uq_print_order(a, b));
        crate::polalg::write_sum(f, keys.into_iter().map(|m| (&self.terms[m], pbw_str(*m))))
    }
}

impl fmt::Debug for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UqElement({self})")
    }
}

impl crate::expr::ExprTarget for UqElement {
    const KIND: &'static str = "U_q sl2";

    fn from_scalar(c: ExactScalar) -> Self {
        UqElement::scalar(c)
    }

    fn generator(name: &str) -> Option<Self> {
        match name {
            "E" => Some(UqElement::e()),
            "F" => Some(UqElement::f()),
            "K" => Some(UqElement::k()),
            "Kinv" => Some(UqElement::kinv()),
            "Omega" => Some(casimir()),
            _ => None,
        }
    }

    fn as_scalar(&self) -> Option<ExactScalar> {
        UqElement::as_scalar(self)
    }

    fn add(&self, other: &Self) -> Self {
        UqElement::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        UqElement::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        uq_mul(self, other)
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        UqElement::scale(self, c)
    }

    fn inverse(&self) -> Option<Self> {
        let mut it = self.terms.iter();
        let (m, c) = it.next()?;
        if it.next().is_some() || m.f != 0 || m.e != 0 {
            return None;
        }
        Some(UqElement::monomial(Pbw::new(0, -m.k, 0), c.inv().ok()?))
    }
}
