use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::fp::{factor_degrees, FpPoly};
use super::SplittingError;
use crate::primes::primes_up_to;

/// A monic polynomial with integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self, SplittingError> {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(SplittingError::Parse("polynomial must have degree ≥ 1".into()));
        }
        if coeffs.last() != Some(&1) {
            return Err(SplittingError::NotMonic);
        }
        Ok(IntPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Comma-separated coefficients, constant first.
    pub fn coeff_string(&self) -> String {
        self.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn derivative_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect()
    }

    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        FpPoly::from_integers(p, &self.coeffs)
    }

    fn eval(&self, x: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 { f.write_str("x")? } else { write!(f, "x^{k}")? }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = SplittingError;

    /// Accepts `x^3-2` style expressions or coefficient lists such as
    /// `-2,0,0,1` (constant first).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(SplittingError::Parse("empty polynomial".into()));
        }
        if !s.contains('x') {
            let coeffs: Result<Vec<i64>, _> = s.split(',').map(str::parse).collect();
            return IntPoly::new(coeffs.map_err(|e| SplittingError::Parse(format!("`{s}`: {e}")))?);
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut coeffs: Vec<i64> = Vec::new();
        for term in terms {
            let (coef, power) = parse_term(term)?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = coeffs[power]
                .checked_add(coef)
                .ok_or_else(|| SplittingError::Parse("coefficient overflow".into()))?;
        }
        IntPoly::new(coeffs)
    }
}

fn parse_term(term: &str) -> Result<(i64, usize), SplittingError> {
    let bad = || SplittingError::Parse(format!("cannot parse term `{term}`"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (1, &term[1..]),
        Some(b'-') => (-1, &term[1..]),
        _ => (1, term),
    };
    if body.is_empty() {
        return Err(bad());
    }
    match body.find('x') {
        None => Ok((sign * body.parse::<i64>().map_err(|_| bad())?, 0)),
        Some(pos) => {
            let coef_part = body[..pos].trim_end_matches('*');
            let coef = if coef_part.is_empty() { 1 } else { coef_part.parse::<i64>().map_err(|_| bad())? };
            let rest = &body[pos + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
            };
            Ok((sign * coef, power))
        }
    }
}

/// Determinant of a square integer matrix by fraction-free elimination.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let zero = BigInt::from(0);
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k] == zero {
            match (k + 1..n).find(|&r| m[r][k] != zero) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Sylvester resultant of two integer polynomials (constant-first).
pub fn resultant(a: &[i64], b: &[i64]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::from(1);
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::from(0); size];
        for (i, &c) in a.iter().rev().enumerate() {
            row[shift + i] = BigInt::from(c);
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::from(0); size];
        for (i, &c) in b.iter().rev().enumerate() {
            row[shift + i] = BigInt::from(c);
        }
        rows.push(row);
    }
    bareiss_determinant(rows)
}

/// `disc(f) = (−1)^{d(d−1)/2} · Res(f, f′)` for monic `f`; `1` in degree 1.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let d = f.degree();
    if d == 1 {
        return BigInt::from(1);
    }
    let res = resultant(f.coeffs(), &f.derivative_coeffs());
    if (d * (d - 1) / 2) % 2 == 1 { -res } else { res }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn has_rational_root(f: &IntPoly) -> bool {
    let c0 = f.coeffs()[0];
    if c0 == 0 {
        return true;
    }
    divisors(c0.unsigned_abs())
        .into_iter()
        .flat_map(|d| [d as i128, -(d as i128)])
        .any(|r| f.eval(r) == Some(0))
}

fn integer_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Whether a monic quartic factors as two monic integer quadratics.
fn has_quadratic_factor(f: &IntPoly) -> bool {
    let c = f.coeffs();
    let (e, cc, b, a) = (c[0] as i128, c[1] as i128, c[2] as i128, c[3] as i128);
    if e == 0 {
        return true;
    }
    for d in divisors(e.unsigned_abs() as u64) {
        for q in [d as i128, -(d as i128)] {
            let s = e / q;
            if q != s {
                let num = cc - q * a;
                let den = s - q;
                if num % den == 0 {
                    let p = num / den;
                    let r = a - p;
                    if p * r + q + s == b {
                        return true;
                    }
                }
            } else if q * a == cc {
                // p + r = a, p·r = b − 2q
                let disc = a * a - 4 * (b - 2 * q);
                if let Some(root) = integer_sqrt(disc) {
                    if (a + root) % 2 == 0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Certifies irreducibility over `Q`: first by irreducibility mod a small
/// good prime, then by the degree ≤ 4 rational-root and quadratic-factor
/// checks.
pub fn certify_irreducible(f: &IntPoly, disc: &BigInt) -> Result<(), SplittingError> {
    let d = f.degree();
    if d == 1 {
        return Ok(());
    }
    let zero = BigInt::from(0);
    for p in primes_up_to(2_000) {
        if disc % BigInt::from(p) == zero {
            continue;
        }
        if factor_degrees(&f.reduce_mod(p)) == [(d, 1)] {
            return Ok(());
        }
    }
    let reducible = match d {
        2 | 3 => has_rational_root(f),
        4 => has_rational_root(f) || has_quadratic_factor(f),
        _ => return Err(SplittingError::Uncertified(f.to_string())),
    };
    if reducible {
        Err(SplittingError::Reducible(f.to_string()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_expressions_and_lists() {
        assert_eq!(p("x^3-2").coeffs(), &[-2, 0, 0, 1]);
        assert_eq!(p("x^4 - 2").coeffs(), &[-2, 0, 0, 0, 1]);
        assert_eq!(p("x^2+1").coeffs(), &[1, 0, 1]);
        assert_eq!(p("x^3 + 3*x^2 - 5x + 7").coeffs(), &[7, -5, 3, 1]);
        assert_eq!(p("x-1").coeffs(), &[-1, 1]);
        assert_eq!(p("-2,0,0,1"), p("x^3-2"));
        assert!(matches!("2x^2+1".parse::<IntPoly>(), Err(SplittingError::NotMonic)));
        assert!(matches!("1,0,2".parse::<IntPoly>(), Err(SplittingError::NotMonic)));
        assert!("x^".parse::<IntPoly>().is_err());
        assert!("7".parse::<IntPoly>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["x^3-2", "x^4-2", "x^2+1", "x-1", "x^3+3*x^2-5*x+7"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    /// `disc(x^n + a) = (−1)^{n(n−1)/2} n^n a^{n−1}`
    fn binomial_disc(n: u32, a: i64) -> BigInt {
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        BigInt::from(sign) * BigInt::from(n).pow(n) * BigInt::from(a).pow(n - 1)
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&p("x^2+1")), BigInt::from(-4));
        assert_eq!(discriminant(&p("x^3-2")), BigInt::from(-108));
        assert_eq!(discriminant(&p("x-5")), BigInt::from(1));
        for n in 2..=9u32 {
            for a in [-7i64, -2, 3, 11] {
                let mut coeffs = vec![0i64; n as usize + 1];
                coeffs[0] = a;
                coeffs[n as usize] = 1;
                let f = IntPoly::new(coeffs).unwrap();
                assert_eq!(discriminant(&f), binomial_disc(n, a), "x^{n} + {a}");
            }
        }
        // b² − 4c
        for (b, c) in [(1i64, 1i64), (3, -5), (0, 7)] {
            let f = IntPoly::new(vec![c, b, 1]).unwrap();
            assert_eq!(discriminant(&f), BigInt::from(b * b - 4 * c));
        }
        // x³ + a x + b: −4a³ − 27b²
        for (a, b) in [(-1i64, 1i64), (2, -3), (5, 0)] {
            let f = IntPoly::new(vec![b, a, 0, 1]).unwrap();
            assert_eq!(discriminant(&f), BigInt::from(-4 * a * a * a - 27 * b * b));
        }
    }

    #[test]
    fn discriminant_exceeds_64_bits() {
        let f = p("x^7-1000003");
        let d = discriminant(&f);
        assert_eq!(d, binomial_disc(7, 1_000_003));
        assert!(d.bits() > 64);
    }

    #[test]
    fn irreducibility() {
        for s in ["x^3-2", "x^4-2", "x^2+1", "x-1", "x^4+1", "x^4-10*x^2+1"] {
            let f = p(s);
            certify_irreducible(&f, &discriminant(&f)).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
        for s in ["x^2-1", "x^3-8", "x^4-4", "x^4+4", "x^4-5*x^2+6"] {
            let f = p(s);
            let disc = discriminant(&f);
            assert!(certify_irreducible(&f, &disc).is_err(), "{s}");
        }
    }
}
