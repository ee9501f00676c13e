//! Pol(ℂ)_q: polynomials in `z`, `z*` subject to `z*z = q²zz* + 1 − q²`,
//! kept in the normal order `z^j z*^k`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::scalar::ExactScalar;

/// `Σ a_jk z^j z*^k`, no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PolElement {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

type ReorderCache = Mutex<HashMap<(u32, u32), Vec<ExactScalar>>>;

/// Normal-ordered expansion of `z*^b z^c` as `Σ_i coeff_i · z^(c−i) z*^(b−i)`, indexed by `i`.
fn reorder_table(b: u32, c: u32) -> Vec<ExactScalar> {
    static CACHE: OnceLock<ReorderCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(b, c)) {
        return v.clone();
    }
    // z* · z^m z*^n = q^(2m) z^m z*^(n+1) + (1 − q^(2m)) z^(m−1) z*^n
    let mut cur: Vec<ExactScalar> = vec![ExactScalar::one()];
    for step in 0..b {
        let mut next = vec![ExactScalar::zero(); cur.len() + 1];
        for (i, a) in cur.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let m = c as i64 - i as i64;
            debug_assert!(m >= 0 && (i as u32) <= step);
            next[i] += &(a * &ExactScalar::q_pow(2 * m));
            if m > 0 {
                next[i + 1] += &(a * &(ExactScalar::one() - ExactScalar::q_pow(2 * m)));
            }
        }
        while next.last().is_some_and(|x| x.is_zero()) {
            next.pop();
        }
        cur = next;
    }
    cache.lock().unwrap().insert((b, c), cur.clone());
    cur
}

/// `Π_{i=1..n} (1 − q^(2i))`.
pub fn q_pochhammer(n: u32) -> ExactScalar {
    static CACHE: OnceLock<Mutex<Vec<ExactScalar>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![ExactScalar::one()]));
    let mut v = cache.lock().unwrap();
    while v.len() <= n as usize {
        let i = v.len() as i64;
        let next = &v[v.len() - 1] * &(ExactScalar::one() - ExactScalar::q_pow(2 * i));
        v.push(next);
    }
    v[n as usize].clone()
}

impl PolElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(c: ExactScalar) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c · z^j z*^k`.
    pub fn monomial(j: u32, k: u32, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((j, k), c);
        }
        PolElement { terms }
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, ExactScalar::one())
    }

    pub fn zstar() -> Self {
        Self::monomial(0, 1, ExactScalar::one())
    }

    /// `y = 1 − zz*`.
    pub fn y() -> Self {
        y_expand(1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ExactScalar)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((j, k), c) in it {
            p.add_term(j, k, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, j: u32, k: u32) -> ExactScalar {
        self.terms.get(&(j, k)).cloned().unwrap_or_default()
    }

    /// The scalar value if this element is a multiple of 1.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, j: u32, k: u32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
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
        for ((j, k), c) in &other.terms {
            r.add_term(*j, *k, c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PolElement { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Largest power of `z*` appearing in any term.
    pub fn max_zstar_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// Largest power of `z` appearing in any term.
    pub fn max_z_degree(&self) -> u32 {
        self.terms.keys().map(|&(j, _)| j).max().unwrap_or(0)
    }

    /// Grading `deg(z^j z*^k) = 2(j − k)`; `None` unless homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|&(j, k)| 2 * (j as i64 - k as i64));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        normal_mul(self, other)
    }

    pub fn star(&self) -> Self {
        star_pol(self)
    }
}

/// Normal-ordered product of two monomials: `z^a z*^b · z^c z*^d`.
pub(crate) fn monomial_product(a: u32, b: u32, c: u32, d: u32) -> Vec<((u32, u32), ExactScalar)> {
    if b == 0 || c == 0 {
        return vec![((a + c, b + d), ExactScalar::one())];
    }
    reorder_table(b, c)
        .into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| ((a + c - i as u32, b - i as u32 + d), x))
        .collect()
}

/// The product `f·g` rewritten into normal order.
pub fn normal_mul(f: &PolElement, g: &PolElement) -> PolElement {
    let mut r = PolElement::zero();
    for (&(a, b), x) in &f.terms {
        for (&(c, d), y) in &g.terms {
            let xy = x * y;
            for ((j, k), w) in monomial_product(a, b, c, d) {
                r.add_term(j, k, &(&xy * &w));
            }
        }
    }
    r
}

/// The involution `z ↦ z*`; `(z^j z*^k)* = z^k z*^j` is already normal.
pub fn star_pol(f: &PolElement) -> PolElement {
    PolElement { terms: f.terms.iter().map(|(&(j, k), c)| ((k, j), c.clone())).collect() }
}

/// Normal-ordered expansion of `(1 − zz*)^n`.
pub fn y_expand(n: u32) -> PolElement {
    let y = PolElement::one().sub(&PolElement::monomial(1, 1, ExactScalar::one()));
    (0..n).fold(PolElement::one(), |acc, _| normal_mul(&acc, &y))
}

fn power_str(base: &str, n: u32) -> Option<String> {
    match n {
        0 => None,
        1 => Some(base.to_string()),
        n => Some(format!("{base}^{n}")),
    }
}

/// `z^j*z'^k`, empty for the unit.
pub(crate) fn pol_monomial_str(j: u32, k: u32) -> String {
    [power_str("z", j), power_str("z'", k)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

/// Writes `Σ c·m` in the printer grammar: monomial coefficients are inlined with their
/// sign folded into the joiner, compound ones are parenthesized.
pub(crate) fn write_sum<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a ExactScalar, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative_monomial();
        let body = if c.is_monomial() {
            let mag = if neg { -c } else { c.clone() };
            match (mag.is_one(), mono.is_empty()) {
                (_, true) => mag.to_string(),
                (true, false) => mono,
                (false, false) => format!("{mag}*{mono}"),
            }
        } else if mono.is_empty() {
            format!("({c})")
        } else {
            format!("({c})*{mono}")
        };
        match (first, neg) {
            (true, true) => write!(f, "-{body}")?,
            (true, false) => f.write_str(&body)?,
            (false, true) => write!(f, " - {body}")?,
            (false, false) => write!(f, " + {body}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Printer order: descending total degree, then descending power of `z`.
pub(crate) fn print_order(a: &(u32, u32), b: &(u32, u32)) -> std::cmp::Ordering {
    (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0))
}

impl fmt::Display for PolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| print_order(a, b));
        write_sum(f, keys.into_iter().map(|m| (&self.terms[m], pol_monomial_str(m.0, m.1))))
    }
}

impl fmt::Debug for PolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolElement({self})")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::q_pow(n)
    }

    fn one() -> ExactScalar {
        ExactScalar::one()
    }

    pub(crate) fn arb_coeff() -> impl Strategy<Value = ExactScalar> {
        (-3i64..=3, -3i64..=3).prop_map(|(c, e)| ExactScalar::monomial(c, e))
    }

    pub(crate) fn arb_pol(max_deg: u32) -> impl Strategy<Value = PolElement> {
        prop::collection::vec(((0..=max_deg, 0..=max_deg), arb_coeff()), 0..5).prop_map(PolElement::from_terms)
    }

    #[test]
    fn defining_relation() {
        let r = normal_mul(&PolElement::zstar(), &PolElement::z());
        let expected = PolElement::from_terms([((1, 1), q(2)), ((0, 0), one() - q(2))]);
        assert_eq!(r, expected);
    }

    #[test]
    fn zstar_past_z_squared() {
        let z2 = PolElement::monomial(2, 0, one());
        let r = normal_mul(&PolElement::zstar(), &z2);
        let expected = PolElement::from_terms([((2, 1), q(4)), ((1, 0), one() - q(4))]);
        assert_eq!(r, expected);
    }

    #[test]
    fn unit_is_neutral() {
        let f = PolElement::from_terms([((2, 1), q(3)), ((0, 4), ExactScalar::from_int(-2))]);
        assert_eq!(normal_mul(&PolElement::one(), &f), f);
        assert_eq!(normal_mul(&f, &PolElement::one()), f);
    }

    #[test]
    fn star_on_generators() {
        assert_eq!(star_pol(&PolElement::z()), PolElement::zstar());
        let zz = PolElement::monomial(1, 1, one());
        assert_eq!(star_pol(&zz), zz);
    }

    #[test]
    fn powers_of_y() {
        assert_eq!(y_expand(0), PolElement::one());
        assert_eq!(y_expand(1), PolElement::from_terms([((0, 0), one()), ((1, 1), -one())]));
        let expected = PolElement::from_terms([((0, 0), one()), ((1, 1), -(one() + q(2))), ((2, 2), q(2))]);
        assert_eq!(y_expand(2), expected);
    }

    #[test]
    fn printing() {
        let f = normal_mul(&PolElement::zstar(), &PolElement::z());
        assert_eq!(f.to_string(), "q^2*z*z' + (1-q^2)");
        let g = PolElement::from_terms([((2, 1), -q(1)), ((0, 2), one())]);
        assert_eq!(g.to_string(), "-q*z^2*z' + z'^2");
        assert_eq!(PolElement::zero().to_string(), "0");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn associativity(f in arb_pol(4), g in arb_pol(4), h in arb_pol(4)) {
            prop_assert_eq!(normal_mul(&normal_mul(&f, &g), &h), normal_mul(&f, &normal_mul(&g, &h)));
        }

        #[test]
        fn star_is_an_antimultiplicative_involution(f in arb_pol(4), g in arb_pol(4)) {
            prop_assert_eq!(star_pol(&star_pol(&f)), f.clone());
            prop_assert_eq!(star_pol(&normal_mul(&f, &g)), normal_mul(&star_pol(&g), &star_pol(&f)));
        }

        #[test]
        fn grading_is_additive(a in 0u32..5, b in 0u32..5, c in 0u32..5, d in 0u32..5) {
            let f = PolElement::monomial(a, b, one());
            let g = PolElement::monomial(c, d, one());
            let deg = 2 * (a as i64 - b as i64 + c as i64 - d as i64);
            prop_assert_eq!(normal_mul(&f, &g).degree(), Some(deg));
        }
    }
}
