//! Exact scalar fields: arbitrary-precision rationals and small prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rationals, always held in lowest terms with a positive denominator.
pub type Q = BigRational;

/// Arithmetic needed by the space kernel. Every operation is exact.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Map `num/den` into the field; `None` if `den` vanishes in it.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;
    /// Display name, e.g. `Q` or `GF(5)`.
    fn name() -> String;
    /// All elements, for finite fields.
    fn elements() -> Option<Vec<Self>>;
    /// A small random element used by fixture generators.
    fn sample(rng: &mut dyn rand::RngCore) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    /// `"p/q"` rendering used by fixtures and JSON reports.
    fn to_ratio_string(&self) -> String {
        self.to_string()
    }
    /// Storage cost of the element, used to prefer cheap pivots.
    fn size(&self) -> u64 {
        0
    }
    /// Field-specific row reduction to RREF, returning the pivot columns.
    /// `None` selects the generic elimination.
    fn rref_native(_rows: &mut Vec<Vec<Self>>, _ncols: usize) -> Option<Vec<usize>> {
        None
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn name() -> String {
        "Q".into()
    }
    fn elements() -> Option<Vec<Self>> {
        None
    }
    fn sample(rng: &mut dyn rand::RngCore) -> Self {
        use rand::Rng;
        let n: i64 = rng.gen_range(-4..=4);
        let d: i64 = if rng.gen_bool(0.2) { rng.gen_range(1..=3) } else { 1 };
        q(n, d)
    }
    fn size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
    fn rref_native(rows: &mut Vec<Vec<Self>>, ncols: usize) -> Option<Vec<usize>> {
        Some(rational_rref(rows, ncols))
    }
    fn to_ratio_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Element of GF(P). `P` must be prime; values live in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    pub fn new(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u32)
    }
    pub fn value(self) -> u32 {
        self.0
    }
    fn pow(self, mut e: u64) -> Self {
        let (mut b, mut acc) = (self.0 as u64, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P as u64;
            }
            b = b * b % P as u64;
            e >>= 1;
        }
        Gf(acc as u32)
    }
}

impl<const P: u32> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Field for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn one() -> Self {
        Gf(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Gf(((self.0 as u64 + o.0 as u64) % P as u64) as u32)
    }
    fn sub(&self, o: &Self) -> Self {
        Gf(((self.0 as u64 + P as u64 - o.0 as u64) % P as u64) as u32)
    }
    fn mul(&self, o: &Self) -> Self {
        Gf(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Gf((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P as u64 - 2)
    }
    fn from_i64(v: i64) -> Self {
        Gf::new(v)
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let p = BigInt::from(P);
        let red = |x: &BigInt| -> Self {
            let r = ((x % &p) + &p) % &p;
            Gf(r.to_u32().expect("reduced below P"))
        };
        let d = red(den);
        if d.is_zero() {
            None
        } else {
            Some(red(num).div(&d))
        }
    }
    fn name() -> String {
        format!("GF({P})")
    }
    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Gf).collect())
    }
    fn sample(rng: &mut dyn rand::RngCore) -> Self {
        use rand::Rng;
        Gf(rng.gen_range(0..P))
    }
}

/// Parse `"p/q"`, an integer, or a finite decimal such as `-1.25` exactly.
/// Divide an integer row by the gcd of its entries.
fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter().filter(|x| !x.is_zero()) {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for x in row.iter_mut().filter(|x| !x.is_zero()) {
            *x /= &g;
        }
    }
}

/// Gauss-Jordan over ℚ done fraction-free: rows are cleared to primitive
/// integer vectors, eliminated with cross-multiplication, and divided by
/// their pivots only at the end. This keeps gcd work to one pass per row
/// update instead of one per entry operation.
fn rational_rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let mut v: Vec<BigInt> = r.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            make_primitive(&mut v);
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == ints.len() {
            break;
        }
        let Some(p) = (r..ints.len()).filter(|&i| !ints[i][c].is_zero()).min_by_key(|&i| ints[i][c].bits()) else {
            continue;
        };
        ints.swap(r, p);
        let (head, tail) = ints.split_at_mut(r);
        let (pivot, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let g = pivot[c].gcd(&other[c]);
            let m1 = &pivot[c] / &g;
            let m2 = &other[c] / &g;
            // The pivot row vanishes left of c; other entries there only rescale.
            for x in other[..c].iter_mut().filter(|x| !x.is_zero()) {
                *x *= &m1;
            }
            for (x, y) in other[c..].iter_mut().zip(&pivot[c..]) {
                *x = &*x * &m1 - y * &m2;
            }
            make_primitive(other);
        }
        pivots.push(c);
        r += 1;
    }
    ints.truncate(r);
    *rows = ints
        .into_iter()
        .zip(&pivots)
        .map(|(row, &c)| {
            let d = row[c].clone();
            row.into_iter().map(|x| Q::new(x, d.clone())).collect()
        })
        .collect();
    pivots
}

pub fn parse_scalar<F: Field>(tok: &str) -> Option<F> {
    let (num, den) = parse_ratio(tok)?;
    F::from_ratio(&num, &den)
}

/// Parse a token into an exact numerator/denominator pair (denominator nonzero).
pub fn parse_ratio(tok: &str) -> Option<(BigInt, BigInt)> {
    let tok = tok.trim();
    if tok.is_empty() {
        return None;
    }
    if let Some((n, d)) = tok.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some((n, d));
    }
    if let Some((ip, fp)) = tok.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !ip.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp).parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        return Some((if neg { -digits } else { digits }, den));
    }
    Some((tok.parse().ok()?, BigInt::one()))
}

/// Convenience constructor for rationals in tests and fixtures.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// True for a strictly positive rational.
pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_inverse_table() {
        for a in 1..7u32 {
            let x = Gf::<7>(a);
            assert_eq!(x.mul(&x.inv()), Gf::<7>::one());
        }
    }

    #[test]
    fn parses_decimal_exactly() {
        assert_eq!(parse_scalar::<Q>("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_scalar::<Q>("2/-4"), Some(q(-1, 2)));
        assert_eq!(parse_scalar::<Q>("1/0"), None);
        assert_eq!(parse_scalar::<Gf<5>>("1/2"), Some(Gf::<5>::new(3)));
        assert_eq!(parse_scalar::<Gf<5>>("1/5"), None);
    }

    #[test]
    fn ratio_string_is_lowest_terms() {
        assert_eq!(q(6, -4).to_ratio_string(), "-3/2");
        assert_eq!(q(4, 2).to_ratio_string(), "2");
    }
}
