//! Dense univariate polynomials, lowest degree first.

use std::fmt;

use crate::field::{parse_scalar, Field};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    /// From coefficients `α_0, α_1, …`; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| F::from_i64(x)).collect())
    }
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }
    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }
    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }
    /// The monomial `s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = F::one();
        Poly { coeffs: c }
    }
    /// `Π (s − r)`.
    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| acc.mul(&Poly::new(vec![r.neg(), F::one()])))
    }
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }
    /// Coefficient of `s^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Field::is_one)
    }
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv();
                Poly::new(self.coeffs.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }
    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(c)
    }
    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].inv();
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap().mul(&lead_inv);
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].sub(&f.mul(c));
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Field::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }
    /// `Some(q)` with `self = d·q` when `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }
    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }
    /// Coefficients as `p/q` strings, lowest degree first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_ratio_string()).collect()
    }
    /// Parse a coefficient list, lowest degree first, separated by commas
    /// and/or whitespace.
    pub fn parse_coeffs(text: &str) -> Option<Self> {
        let toks: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if toks.is_empty() {
            return None;
        }
        toks.iter().map(|t| parse_scalar::<F>(t)).collect::<Option<Vec<F>>>().map(Poly::new)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    /// Highest degree first, e.g. `s^2 + 2/3 s - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut mag = c.to_ratio_string();
            let neg = mag.starts_with('-');
            if neg {
                mag.remove(0);
            }
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "s".into(),
                _ => format!("s^{i}"),
            };
            match (i, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => f.write_str(&var)?,
                _ => write!(f, "{mag} {var}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
