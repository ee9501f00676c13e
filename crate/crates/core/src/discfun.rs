//! Fun(U)_q = Pol(ℂ)_q + D(U)_q: finite functions `z^j f0 z*^k`, their products with
//! polynomials, the matrix model, the U_q sl₂ action, radial layers and the
//! invariant integrals.
//!
//! `f0` is the projection with `z* f0 = f0 z = 0`, `f0² = f0`. In the matrix model
//! `T(z^j f0 z*^k) = (q²;q²)_j E_jk` with `z e_n = (1 − q^(2n+2)) e_(n+1)`, `z* e_n = e_(n−1)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::ExprTarget;
use crate::hopf::{act, coeffs, UqElement, UqModule};
use crate::laplace::RadialFn;
use crate::polalg::{normal_mul, pol_monomial_str, print_order, q_pochhammer, write_sum, PolElement};
use crate::scalar::ExactScalar;

/// `Σ a_jk · z^j f0 z*^k`; no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FinElement {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

impl FinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn f0() -> Self {
        Self::term(0, 0, ExactScalar::one())
    }

    /// `c · z^j f0 z*^k`.
    pub fn term(j: u32, k: u32, c: ExactScalar) -> Self {
        let mut x = Self::zero();
        x.add_term(j, k, &c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ExactScalar)>>(it: I) -> Self {
        let mut x = Self::zero();
        for ((j, k), c) in it {
            x.add_term(j, k, &c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, j: u32, k: u32) -> ExactScalar {
        self.terms.get(&(j, k)).cloned().unwrap_or_default()
    }

    /// Largest `j` or `k` present.
    pub fn max_index(&self) -> Option<u32> {
        self.terms.keys().map(|&(j, k)| j.max(k)).max()
    }

    pub(crate) fn add_term(&mut self, j: u32, k: u32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((j, k)) {
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
        for (&(j, k), c) in &other.terms {
            r.add_term(j, k, c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FinElement { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FinElement { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// `(z^j f0 z*^k)* = z^k f0 z*^j`; coefficients are real.
    pub fn star(&self) -> Self {
        FinElement { terms: self.terms.iter().map(|(&(j, k), c)| ((k, j), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        fin_times_fin(self, other)
    }
}

/// `Π_{i=0}^{b−1} (1 − q^(2(j−i)))`, the factor in `z*^b z^j f0 = (…) z^(j−b) f0`.
fn lowering_factor(j: u32, b: u32) -> ExactScalar {
    (0..b).map(|i| ExactScalar::one() - ExactScalar::q_pow(2 * (j as i64 - i as i64))).product()
}

fn pol_times_fin(p: &PolElement, f: &FinElement) -> FinElement {
    let mut r = FinElement::zero();
    for (&(a, b), c) in p.terms() {
        for (&(j, k), d) in &f.terms {
            if b <= j {
                r.add_term(a + j - b, k, &(c * d * lowering_factor(j, b)));
            }
        }
    }
    r
}

fn fin_times_pol(f: &FinElement, p: &PolElement) -> FinElement {
    let mut r = FinElement::zero();
    for (&(j, k), d) in &f.terms {
        for (&(a, b), c) in p.terms() {
            if a <= k {
                r.add_term(j, k - a + b, &(c * d * lowering_factor(k, a)));
            }
        }
    }
    r
}

fn fin_times_fin(f: &FinElement, g: &FinElement) -> FinElement {
    let mut r = FinElement::zero();
    for (&(j, k), c) in &f.terms {
        for (&(a, b), d) in &g.terms {
            if k == a {
                r.add_term(j, b, &(c * d * q_pochhammer(k)));
            }
        }
    }
    r
}

/// An element `pol + fin` of Fun(U)_q.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FunElement {
    pub pol: PolElement,
    pub fin: FinElement,
}

impl FunElement {
    pub fn new(pol: PolElement, fin: FinElement) -> Self {
        FunElement { pol, fin }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn f0() -> Self {
        FinElement::f0().into()
    }

    pub fn is_zero(&self) -> bool {
        self.pol.is_zero() && self.fin.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        FunElement { pol: self.pol.add(&other.pol), fin: self.fin.add(&other.fin) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FunElement { pol: self.pol.sub(&other.pol), fin: self.fin.sub(&other.fin) }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        FunElement { pol: self.pol.scale(c), fin: self.fin.scale(c) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        fun_mul(self, other)
    }

    pub fn star(&self) -> Self {
        star_fun(self)
    }

    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.fin.is_zero() {
            self.pol.as_scalar()
        } else {
            None
        }
    }
}

impl From<PolElement> for FunElement {
    fn from(pol: PolElement) -> Self {
        FunElement { pol, fin: FinElement::zero() }
    }
}

impl From<FinElement> for FunElement {
    fn from(fin: FinElement) -> Self {
        FunElement { pol: PolElement::zero(), fin }
    }
}

/// Product in Fun(U)_q.
pub fn fun_mul(f: &FunElement, g: &FunElement) -> FunElement {
    let pol = normal_mul(&f.pol, &g.pol);
    let fin = pol_times_fin(&f.pol, &g.fin).add(&fin_times_pol(&f.fin, &g.pol)).add(&fin_times_fin(&f.fin, &g.fin));
    FunElement { pol, fin }
}

pub fn star_fun(f: &FunElement) -> FunElement {
    FunElement { pol: f.pol.star(), fin: f.fin.star() }
}

/// Finite truncation of the matrix model on `e_0 … e_(N−1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModel {
    pub cutoff: usize,
    /// Sparse entries `(row, col) → value`, zeros omitted.
    pub entries: BTreeMap<(usize, usize), ExactScalar>,
    /// Set when a finite term had an index `≥ cutoff` and was dropped.
    pub truncated: bool,
}

impl MatrixModel {
    pub fn zero(cutoff: usize) -> Self {
        MatrixModel { cutoff, entries: BTreeMap::new(), truncated: false }
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    fn add_entry(&mut self, r: usize, c: usize, v: &ExactScalar) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry((r, c)) {
            Entry::Vacant(e) => {
                e.insert(v.clone());
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut by_row: BTreeMap<usize, Vec<(usize, &ExactScalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = MatrixModel::zero(self.cutoff.min(other.cutoff));
        out.truncated = self.truncated || other.truncated;
        for (&(r, n), a) in &self.entries {
            if let Some(row) = by_row.get(&n) {
                for &(c, b) in row {
                    out.add_entry(r, c, &(a * b));
                }
            }
        }
        out
    }

    /// Keeps rows `< rows` only.
    pub fn restrict_rows(&self, rows: usize) -> Self {
        MatrixModel {
            cutoff: self.cutoff,
            entries: self.entries.iter().filter(|((r, _), _)| *r < rows).map(|(k, v)| (*k, v.clone())).collect(),
            truncated: self.truncated,
        }
    }
}

/// `T(f)` truncated to `N × N`. Polynomial terms are always cut at the window edge;
/// `truncated` reports only lost finite terms.
pub fn to_matrix(f: &FunElement, cutoff: usize) -> MatrixModel {
    let n = cutoff;
    let mut m = MatrixModel::zero(n);
    for (&(j, k), c) in f.pol.terms() {
        let (j, k) = (j as usize, k as usize);
        for col in k..n {
            let row = col - k + j;
            if row >= n {
                break;
            }
            // z^j z*^k e_col = Π_{i=1..j} (1 − q^(2(col−k+i))) e_row
            let w: ExactScalar =
                (1..=j).map(|i| ExactScalar::one() - ExactScalar::q_pow(2 * (col - k + i) as i64)).product();
            m.add_entry(row, col, &(c * &w));
        }
    }
    for (&(j, k), c) in &f.fin.terms {
        if j as usize >= n || k as usize >= n {
            m.truncated = true;
            continue;
        }
        m.add_entry(j as usize, k as usize, &(c * &q_pochhammer(j)));
    }
    m
}

/// `E f0 = f0_e · z f0`.
pub(crate) fn f0_e() -> ExactScalar {
    -(ExactScalar::q_half_pow(1) / (ExactScalar::one() - ExactScalar::q_pow(2)))
}

/// `F f0 = f0_f · f0 z*`.
pub(crate) fn f0_f() -> ExactScalar {
    -(ExactScalar::q_half_pow(5) / (ExactScalar::one() - ExactScalar::q_pow(2)))
}

impl UqModule for FinElement {
    fn act_e(&self) -> Self {
        // E(z^j · f0 z*^k) = E(z^j) f0 z*^k + K(z^j) (E(f0) z*^k + f0 E(z*^k))
        let mut r = FinElement::zero();
        let a = f0_e();
        for (&(j, k), c) in &self.terms {
            let kj = ExactScalar::q_pow(2 * j as i64);
            r.add_term(j + 1, k, &(c * &(coeffs::e_z(j) + &kj * &a)));
            if k > 0 {
                r.add_term(j, k - 1, &(c * &(kj * coeffs::e_zs(k))));
            }
        }
        r
    }

    fn act_f(&self) -> Self {
        // F(z^j · f0 z*^k) = F(z^j) K⁻¹(f0 z*^k) + z^j (F(f0) K⁻¹(z*^k) + f0 F(z*^k))
        let mut r = FinElement::zero();
        let b = f0_f();
        for (&(j, k), c) in &self.terms {
            let kk = ExactScalar::q_pow(2 * k as i64);
            if j > 0 {
                r.add_term(j - 1, k, &(c * &(coeffs::f_z(j) * &kk)));
            }
            r.add_term(j, k + 1, &(c * &(kk * &b + coeffs::f_zs(k))));
        }
        r
    }

    fn act_k(&self, n: i32) -> Self {
        FinElement { terms: self.terms.iter().map(|(&(j, k), c)| ((j, k), c * &coeffs::k_weight(n, j, k))).collect() }
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        FinElement::scale(self, c)
    }

    fn add(&self, other: &Self) -> Self {
        FinElement::add(self, other)
    }

    fn zero() -> Self {
        FinElement::zero()
    }
}

impl UqModule for FunElement {
    fn act_e(&self) -> Self {
        FunElement { pol: self.pol.act_e(), fin: self.fin.act_e() }
    }

    fn act_f(&self) -> Self {
        FunElement { pol: self.pol.act_f(), fin: self.fin.act_f() }
    }

    fn act_k(&self, n: i32) -> Self {
        FunElement { pol: self.pol.act_k(n), fin: self.fin.act_k(n) }
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        FunElement::scale(self, c)
    }

    fn add(&self, other: &Self) -> Self {
        FunElement::add(self, other)
    }

    fn zero() -> Self {
        FunElement::zero()
    }
}

/// The U_q sl₂ action on Fun(U)_q.
pub fn act_fun(x: &UqElement, f: &FunElement) -> FunElement {
    act(x, f)
}

/// Radial layers of the finite part: `f = Σ_{j>0} z^j ψ_j(y) + ψ_0(y) + Σ_{j>0} ψ_(−j)(y) z*^j`,
/// each `ψ_j` sampled at `y = q^(2m)`. The term `z^a f0 z*^b` sits in layer `a − b` at
/// `m = min(a, b)` with value `coeff · (q²;q²)_m`.
pub fn radial_decompose(f: &FunElement) -> BTreeMap<i64, RadialFn<ExactScalar>> {
    let mut layers: BTreeMap<i64, Vec<ExactScalar>> = BTreeMap::new();
    for (&(a, b), c) in &f.fin.terms {
        let m = a.min(b) as usize;
        let v = layers.entry(a as i64 - b as i64).or_default();
        if v.len() <= m {
            v.resize(m + 1, ExactScalar::zero());
        }
        v[m] = c * &q_pochhammer(m as u32);
    }
    layers.into_iter().map(|(j, v)| (j, RadialFn::new(v))).collect()
}

/// Inverse of [`radial_decompose`].
pub fn radial_compose(layers: &BTreeMap<i64, RadialFn<ExactScalar>>) -> FinElement {
    let mut f = FinElement::zero();
    for (&j, psi) in layers {
        for (m, v) in psi.values.iter().enumerate() {
            let (a, b) =
                if j >= 0 { (m as u32 + j as u32, m as u32) } else { (m as u32, m as u32 + j.unsigned_abs() as u32) };
            f.add_term(a, b, &(v / &q_pochhammer(m as u32)));
        }
    }
    f
}

/// The invariant integral `η(z^j f0 z*^k) = δ_jk q^(−2k) (q²;q²)_k`.
pub fn eta(f: &FinElement) -> ExactScalar {
    f.terms
        .iter()
        .filter(|((j, k), _)| j == k)
        .map(|(&(_, k), c)| c * &ExactScalar::q_pow(-2 * k as i64) * q_pochhammer(k))
        .sum()
}

/// `ν(f) = (1 − q²) Σ_m ψ_0(q^(2m)) q^(−2m)` over the layer-0 profile.
pub fn nu_integral(f: &FinElement) -> ExactScalar {
    let layers = radial_decompose(&f.clone().into());
    let Some(psi) = layers.get(&0) else {
        return ExactScalar::zero();
    };
    let s: ExactScalar = psi.values.iter().enumerate().map(|(m, v)| v * &ExactScalar::q_pow(-2 * m as i64)).sum();
    (ExactScalar::one() - ExactScalar::q_pow(2)) * s
}

/// `(f1, f2) = ν(f2* f1)`.
pub fn scalar_product(f1: &FinElement, f2: &FinElement) -> ExactScalar {
    nu_integral(&fin_times_fin(&f2.star(), f1))
}

type SparseVec = BTreeMap<(u32, u32), ExactScalar>;

/// Incremental row echelon form over ℚ(q^(1/2)).
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<((u32, u32), SparseVec)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = v.get(p).cloned() {
                for (key, x) in row {
                    let nv = v.get(key).cloned().unwrap_or_default() - &c * x;
                    if nv.is_zero() {
                        v.remove(key);
                    } else {
                        v.insert(*key, nv);
                    }
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let r: SparseVec = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        // keep earlier rows reduced against the new pivot so `reduce` is a single pass
        for (_, row) in &mut self.rows {
            if let Some(c) = row.get(&p).cloned() {
                for (key, x) in &r {
                    let nv = row.get(key).cloned().unwrap_or_default() - &c * x;
                    if nv.is_zero() {
                        row.remove(key);
                    } else {
                        row.insert(*key, nv);
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Outcome of [`span_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub m: u32,
    pub maxlen: u32,
    /// Whether every `z^i f0 z*^j` with `i, j ≤ m` lies in the span.
    pub contained: bool,
    /// Rank of `{F^a E^c · f0 : a + c ≤ maxlen}`.
    pub rank: usize,
    /// How many window basis vectors are reached.
    pub window_rank: usize,
    pub window_dim: usize,
}

/// Exact check that `F^a E^c · f0` (`a + c ≤ maxlen`) spans the window `i, j ≤ m`.
/// `K` only rescales weight vectors, so PBW monomials without `K` suffice.
pub fn span_check(m: u32, maxlen: u32) -> SpanReport {
    let mut ech = Echelon::default();
    let mut e_pows = vec![FinElement::f0()];
    for c in 0..maxlen as usize {
        let next = e_pows[c].act_e();
        e_pows.push(next);
    }
    for (c, ev) in e_pows.iter().enumerate() {
        let mut v = ev.clone();
        for _ in 0..=(maxlen as usize - c) {
            ech.insert(&v.terms);
            v = v.act_f();
        }
    }
    let mut window_rank = 0;
    for i in 0..=m {
        for j in 0..=m {
            let b: SparseVec = [((i, j), ExactScalar::one())].into_iter().collect();
            if ech.contains(&b) {
                window_rank += 1;
            }
        }
    }
    let window_dim = ((m + 1) * (m + 1)) as usize;
    SpanReport { m, maxlen, contained: window_rank == window_dim, rank: ech.rank(), window_rank, window_dim }
}

/// Dimension of `{f : z* f = f z = 0}` inside the window `j, k < n`.
pub fn kernel_dim(n: u32) -> usize {
    let zs = PolElement::zstar();
    let z = PolElement::z();
    // rank of f ↦ (z* f, f z), with the two images placed in disjoint coordinate blocks
    let mut ech = Echelon::default();
    let mut columns: BTreeMap<(u32, u32), SparseVec> = BTreeMap::new();
    for j in 0..n {
        for k in 0..n {
            let b = FinElement::term(j, k, ExactScalar::one());
            let left = pol_times_fin(&zs, &b);
            let right = fin_times_pol(&b, &z);
            let mut col = SparseVec::new();
            for (&(a, c), x) in left.terms() {
                col.insert((2 * a, c), x.clone());
            }
            for (&(a, c), x) in right.terms() {
                col.insert((2 * a + 1, c), x.clone());
            }
            columns.insert((j, k), col);
        }
    }
    for col in columns.values() {
        ech.insert(col);
    }
    (n * n) as usize - ech.rank()
}

fn fin_monomial_str(j: u32, k: u32) -> String {
    [pol_monomial_str(j, 0), "f0".to_string(), pol_monomial_str(0, k)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for FinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| print_order(a, b));
        write_sum(f, keys.into_iter().map(|m| (&self.terms[m], fin_monomial_str(m.0, m.1))))
    }
}

impl fmt::Debug for FinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinElement({self})")
    }
}

impl fmt::Display for FunElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pk: Vec<_> = self.pol.terms().map(|(k, c)| (*k, c)).collect();
        pk.sort_by(|a, b| print_order(&a.0, &b.0));
        let mut fk: Vec<_> = self.fin.terms.iter().map(|(k, c)| (*k, c)).collect();
        fk.sort_by(|a, b| print_order(&a.0, &b.0));
        let terms = pk
            .into_iter()
            .map(|((j, k), c)| (c, pol_monomial_str(j, k)))
            .chain(fk.into_iter().map(|((j, k), c)| (c, fin_monomial_str(j, k))));
        write_sum(f, terms)
    }
}

impl fmt::Debug for FunElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunElement({self})")
    }
}

impl ExprTarget for FunElement {
    const KIND: &'static str = "Fun(U)_q";

    fn from_scalar(c: ExactScalar) -> Self {
        PolElement::scalar(c).into()
    }

    fn generator(name: &str) -> Option<Self> {
        match name {
            "z" => Some(PolElement::z().into()),
            "z'" => Some(PolElement::zstar().into()),
            "y" => Some(PolElement::y().into()),
            "f0" => Some(FunElement::f0()),
            _ => None,
        }
    }

    fn as_scalar(&self) -> Option<ExactScalar> {
        FunElement::as_scalar(self)
    }

    fn add(&self, other: &Self) -> Self {
        FunElement::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        FunElement::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        fun_mul(self, other)
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        FunElement::scale(self, c)
    }
}

/// Rejects a fun-expression whose finite part reaches past the cutoff.
pub fn check_cutoff(f: &FunElement, cutoff: usize) -> Result<()> {
    match f.fin.max_index() {
        Some(m) if m as usize >= cutoff => Err(Error::CutoffTooSmall { cutoff, needed: m as usize + 1 }),
        _ => Ok(()),
    }
}
