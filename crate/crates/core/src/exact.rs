//! Exact rational arithmetic: univariate polynomials, Sturm root counting,
//! fraction-free determinants, characteristic polynomials, interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2/7"`, `"0.125"`, `"1e-9"` or `"2.5E3"` exactly.
pub fn parse_rational(text: &str) -> Option<Q> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = Q::from_integer(digits);
    if scale >= 0 {
        value *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Decimal string with `digits` fractional digits, rounded toward -∞
/// (`up = false`) or +∞ (`up = true`).
pub fn to_decimal(x: &Q, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * Q::from_integer(scale.clone());
    let int = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = int.is_negative();
    let (whole, frac) = int.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = digits
    )
}

/// Approximate value for logs and heuristics; never used in certification.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Dense polynomial, coefficients from the constant term upward, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| q(v)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, by: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * by).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Same roots, leading coefficient 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Positive rescaling that keeps every sign: divide by |leading|.
    fn sign_normalized(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.abs().recip();
                self.scale(&inv)
            }
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: the same roots, each simple.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Upper bound on the absolute value of every root: `1 + max |c_k / c_d|`.
    pub fn cauchy_bound(&self) -> Q {
        let Some(lead) = self.leading() else {
            return Q::zero();
        };
        let lead = lead.abs();
        let mut m = Q::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + Q::one()
    }
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.sign_normalized()];
        let d = p.derivative().sign_normalized();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let k = seq.len();
            let r = seq[k - 2].div_rem(&seq[k - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.sign_normalized().scale(&q(-1)));
        }
        Self { seq }
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Q) -> usize {
        Self::changes(self.seq.iter().map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::changes(self.seq.iter().map(|p| match p.leading() {
            Some(l) if l.is_positive() => 1,
            Some(_) => -1,
            None => 0,
        }))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &Q, b: &Q) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots in `(a, ∞)`.
    pub fn count_above(&self, a: &Q) -> usize {
        self.variations_at(a)
            .saturating_sub(self.variations_at_pos_inf())
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a rational matrix: clear each row's denominators, then Bareiss.
pub fn det_rational(a: &[Vec<Q>]) -> Q {
    let mut scale = Q::one();
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= Q::from_integer(l.clone());
            row.iter()
                .map(|c| (c * Q::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    Q::from_integer(bareiss_det(rows)) / scale
}

/// Coefficients of `det(xI − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &[Vec<Q>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for (l, a_il) in a[i].iter().enumerate() {
                if a_il.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !m[l][j].is_zero() {
                        next[i][j] += a_il * &m[l][j];
                    }
                }
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut trace = Q::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !m[l][i].is_zero() {
                    trace += &a[i][l] * &m[l][i];
                }
            }
        }
        coeffs[n - k] = -trace / q(k as i64);
    }
    Poly::new(coeffs)
}

/// The unique polynomial of degree < len through the points (Newton form).
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Poly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut table = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = Poly::zero();
    for i in (0..n).rev() {
        // poly = poly·(x − xs[i]) + table[i]
        let shift = Poly::new(vec![-xs[i].clone(), Q::one()]);
        poly = poly.mul(&shift).add(&Poly::new(vec![table[i].clone()]));
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_rational("13.2"), Some(qf(66, 5)));
        assert_eq!(parse_rational("1e-9"), Some(qf(1, 1_000_000_000)));
        assert_eq!(parse_rational("-2/6"), Some(qf(-1, 3)));
        assert_eq!(parse_rational("2.5E3"), Some(q(2500)));
        assert_eq!(parse_rational(".5"), Some(qf(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn decimal_rounding_is_directed() {
        let x = qf(-1, 3);
        assert_eq!(to_decimal(&x, 3, false), "-0.334");
        assert_eq!(to_decimal(&x, 3, true), "-0.333");
        assert_eq!(to_decimal(&qf(7, 2), 0, true), "4");
        assert_eq!(to_decimal(&qf(1, 8), 2, false), "0.12");
    }

    #[test]
    fn poly_division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = Poly::from_ints(&[2, -3, 0, 1]);
        let d = p.derivative();
        assert_eq!(p.gcd(&d), Poly::from_ints(&[-1, 1]));
        assert_eq!(p.squarefree(), Poly::from_ints(&[-2, 1, 1]));
        let (qt, r) = p.div_rem(&Poly::from_ints(&[2, 1]));
        assert!(r.is_zero());
        assert_eq!(qt, Poly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        // roots -2, 1, 3
        let p = Poly::from_ints(&[-2, 1, 1]).mul(&Poly::from_ints(&[-3, 1]));
        let s = Sturm::new(&p);
        assert_eq!(s.count_in(&q(-10), &q(10)), 3);
        assert_eq!(s.count_in(&q(1), &q(3)), 1); // (1,3] contains 3 only
        assert_eq!(s.count_in(&q(0), &q(1)), 1);
        assert_eq!(s.count_above(&q(2)), 1);
        assert_eq!(s.count_above(&q(3)), 0);
        assert!(p.cauchy_bound() > q(3));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        fn cofactor(a: &[Vec<i64>]) -> i64 {
            let n = a.len();
            if n == 1 {
                return a[0][0];
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = a[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|&(k, _)| k != j)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * a[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let big = a
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            assert_eq!(bareiss_det(big), BigInt::from(cofactor(&a)));
        }
    }

    #[test]
    fn char_poly_agrees_with_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let a: Vec<Vec<Q>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| qf(rng.gen_range(0..6), rng.gen_range(1..4)))
                        .collect()
                })
                .collect();
            let p = char_poly(&a);
            assert_eq!(p.degree(), Some(n));
            let x = qf(rng.gen_range(-7..7), rng.gen_range(1..5));
            let shifted: Vec<Vec<Q>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                &x - &a[i][j]
                            } else {
                                -a[i][j].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            assert_eq!(p.eval(&x), det_rational(&shifted));
        }
    }

    #[test]
    fn small_char_polys() {
        let k2 = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(char_poly(&k2), Poly::from_ints(&[-1, 0, 1]));
        let k23 = vec![vec![q(0), q(3)], vec![q(2), q(0)]];
        assert_eq!(char_poly(&k23), Poly::from_ints(&[-6, 0, 1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Poly::new(vec![qf(1, 3), q(-2), q(0), qf(5, 7)]);
        let xs: Vec<Q> = (0..6).map(|k| q(3 * k + 1)).collect();
        let ys: Vec<Q> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }
}
