//! Dense polynomials over `F_p` for `p < 2⁶³`, with square-free and
//! distinct-degree factorization.

/// Coefficients constant-first, no trailing zeros; the zero polynomial is
/// empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p { s - p } else { s }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b { a - b } else { a + p - b }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = FpPoly { p, coeffs };
        poly.trim();
        poly
    }

    /// Reduces integer coefficients mod `p`.
    pub fn from_integers(p: u64, coeffs: &[i64]) -> Self {
        let reduced = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        Self::new(p, reduced)
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, self.p)
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        FpPoly::new(self.p, out)
    }

    pub fn derivative(&self) -> FpPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p);
                FpPoly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::new(p, Vec::new()), self.clone());
        }
        let lead_inv = inv_mod(divisor.coeffs[dd], p);
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = sub_mod(rem[i - dd + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`
    pub fn pow_mod(&self, mut e: u64, modulus: &FpPoly) -> FpPoly {
        let mut result = FpPoly::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        result
    }

    /// For `f(x) = g(x^p)`, returns `g` (the `p`-th root, since `a^p = a` in `F_p`).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        FpPoly::new(self.p, coeffs)
    }
}

/// Square-free factorization of a monic polynomial: `(factor, multiplicity)`
/// with each factor square-free and pairwise coprime.
pub fn square_free_factorization(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    sff_into(&f.monic(), 1, &mut out);
    out
}

fn sff_into(f: &FpPoly, scale: usize, out: &mut Vec<(FpPoly, usize)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = f.p;
    let fd = f.derivative();
    if fd.is_zero() {
        sff_into(&f.pth_root(), scale * p as usize, out);
        return;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i * scale));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        sff_into(&c.pth_root(), scale * p as usize, out);
    }
}

/// Degrees of the irreducible factors of a square-free monic polynomial.
pub fn distinct_degree_factorization(g: &FpPoly) -> Vec<usize> {
    let p = g.p;
    let mut degrees = Vec::new();
    let mut rest = g.monic();
    let x = FpPoly::x(p);
    let mut h = x.rem(&rest);
    let mut k = 1;
    while rest.degree().unwrap_or(0) >= 2 * k {
        h = h.pow_mod(p, &rest);
        let factor = h.sub(&x).gcd(&rest);
        let fdeg = factor.degree().unwrap_or(0);
        if fdeg > 0 {
            degrees.extend(std::iter::repeat_n(k, fdeg / k));
            rest = rest.div_rem(&factor).0;
            h = h.rem(&rest);
        }
        k += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        degrees.push(d);
    }
    degrees.sort_unstable();
    degrees
}

/// `(degree, multiplicity)` of each irreducible factor of a monic `f`, sorted.
pub fn factor_degrees(f: &FpPoly) -> Vec<(usize, usize)> {
    let mut shape: Vec<(usize, usize)> = square_free_factorization(f)
        .into_iter()
        .flat_map(|(g, m)| distinct_degree_factorization(&g).into_iter().map(move |d| (d, m)))
        .collect();
    shape.sort_unstable();
    shape
}
