//! Sparse multivariate polynomials with lex-ordered terms and a recursive
//! primitive-PRS gcd.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::Field;

/// Exponent vector with trailing zeros trimmed, so that the derived `Ord`
/// is the lexicographic monomial order (variable 0 most significant).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, power: u32) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = power;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the largest variable with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let e = (0..len).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial::new(e)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut e = self.0.clone();
        for (i, &b) in other.0.iter().enumerate() {
            e[i] = e[i].checked_sub(b)?;
        }
        Some(Monomial::new(e))
    }

    fn without_var(&self, var: usize) -> Monomial {
        let mut e = self.0.clone();
        if var < e.len() {
            e[var] = 0;
        }
        Monomial::new(e)
    }
}

/// Polynomial over a field in variables `x0, x1, …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<F: Field> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Default for MPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> MPoly<F> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(Monomial::var(index, 1), F::one())
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> F {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(F::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone() * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a point; variables beyond `point.len()` read as zero.
    pub fn evaluate(&self, point: &[F]) -> F {
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(F::zero);
                for _ in 0..e {
                    t *= &x;
                }
            }
            total += &t;
        }
        total
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(dm)?;
            let c = rc.clone() * &dinv;
            rem = rem.sub(&d.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `var`, index = power of `var`.
    fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(var) as usize].add_term(m.without_var(var), c.clone());
        }
        out
    }

    fn lead_coeff_in(&self, var: usize) -> Self {
        let d = self.degree_in(var);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.exp(var) == d {
                out.add_term(m.without_var(var), c.clone());
            }
        }
        out
    }

    fn content_in(&self, var: usize) -> Self {
        self.coeffs_in(var)
            .iter()
            .fold(Self::zero(), |g, c| if c.is_zero() { g } else { Self::gcd(&g, c) })
    }

    fn primitive_in(&self, var: usize) -> Self {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `d` as polynomials in `var`.
    fn prem(&self, d: &Self, var: usize) -> Self {
        let dd = d.degree_in(var);
        let lc = d.lead_coeff_in(var);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= dd {
            let dr = r.degree_in(var);
            let lr = r.lead_coeff_in(var);
            let shift = Monomial::var(var, dr - dd);
            let sub = d.mul(&lr).mul_term(&shift, &F::one());
            r = r.mul(&lc).sub(&sub);
        }
        r
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let var = match (a.max_var(), b.max_var()) {
            (None, None) => return Self::one(),
            (x, y) => x.max(y).expect("some variable"),
        };
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let content = Self::gcd(&ca, &cb);
        let mut p = a.exact_div(&ca).expect("content divides");
        let mut q = b.exact_div(&cb).expect("content divides");
        if p.degree_in(var) < q.degree_in(var) {
            std::mem::swap(&mut p, &mut q);
        }
        while !q.is_zero() {
            if q.degree_in(var) == 0 {
                p = Self::one();
                break;
            }
            let r = p.prem(&q, var);
            p = q;
            q = if r.is_zero() { r } else { r.primitive_in(var).monic() };
        }
        let g = if p.degree_in(var) == 0 { Self::one() } else { p.primitive_in(var) };
        content.mul(&g).monic()
    }

    /// Formats with variables named by `name`.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, name: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { name(i) } else { format!("{}^{}", name(i), e) })
                .collect();
            let needs_paren = body.contains(['+', '-', ' ']);
            match (vars.is_empty(), body == "1") {
                (true, _) => write!(f, "{body}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) if needs_paren => write!(f, "({body})*{}", vars.join("*"))?,
                (false, false) => write!(f, "{body}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<F: Field> PartialOrd for MPoly<F>
where
    F: Ord,
{
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field + Ord> Ord for MPoly<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

/// [`MPoly`] rendered with custom variable names.
pub struct Named<'a, F: Field, N: Fn(usize) -> String> {
    poly: &'a MPoly<F>,
    name: N,
}

impl<F: Field, N: Fn(usize) -> String> fmt::Display for Named<'_, F, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt_with(f, &self.name)
    }
}

impl<F: Field> MPoly<F> {
    pub fn display_with<N: Fn(usize) -> String>(&self, name: N) -> Named<'_, F, N> {
        Named { poly: self, name }
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{i}"))
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
