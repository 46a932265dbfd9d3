//! Univariate polynomials over the rationals.
//!
//! Used for exact eigenvalue bookkeeping: characteristic polynomials of
//! rational matrices, square-free decomposition, Sturm root counting and the
//! Descartes sign rule (exact for real-rooted polynomials such as the
//! characteristic polynomial of a symmetric matrix).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, Rational};
use crate::matrix::Matrix;

/// Coefficients in ascending order of degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})x^{i}"))
            .collect();
        write!(f, "Poly[{}]", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![Rational::one()])
    }

    /// `x - root`
    pub fn linear(root: Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new(
            (0..len)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_int(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.lead().expect("division by zero polynomial").clone();
        let ddeg = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= ddeg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + ddeg] / &dlead;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(ddeg);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Yun's square-free decomposition: `self = c · Π fᵢ^i` with the fᵢ
    /// square-free and pairwise coprime. Returns `(fᵢ, i)` for non-constant fᵢ.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (same roots, all simple).
    pub fn square_free_part(&self) -> Poly {
        self.square_free_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, (f, _)| acc.mul(&f))
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        seq
    }

    fn sign_variations_at(seq: &[Poly], x: &Rational) -> usize {
        sign_changes(seq.iter().map(|p| p.eval(x)))
    }

    /// Number of distinct real roots in `(lo, hi]`, via Sturm's theorem.
    pub fn count_distinct_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 || lo >= hi {
            return 0;
        }
        let seq = self.square_free_part().sturm_sequence();
        Self::sign_variations_at(&seq, lo).saturating_sub(Self::sign_variations_at(&seq, hi))
    }

    /// Multiplicity of `root` as a root (0 if not a root).
    pub fn root_multiplicity(&self, root: &Rational) -> usize {
        let lin = Poly::linear(root.clone());
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Number of roots equal to zero (lowest nonzero coefficient index).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    /// Sign changes in the coefficient sequence. For a polynomial with only
    /// real roots this is exactly the number of positive roots, counted with
    /// multiplicity.
    pub fn descartes_positive_roots(&self) -> usize {
        sign_changes(self.0.iter().cloned())
    }

    /// `p(x + shift)`
    pub fn shift(&self, shift: &Rational) -> Poly {
        let x_plus = Poly::new(vec![shift.clone(), Rational::one()]);
        self.0.iter().rev().fold(Poly::zero(), |acc, c| {
            acc.mul(&x_plus).add(&Poly::new(vec![c.clone()]))
        })
    }
}

fn sign_changes(values: impl Iterator<Item = Rational>) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

/// Characteristic polynomial `det(xI − A)` by reduction to Hessenberg form.
pub fn char_poly(a: &Matrix<Rational>) -> Poly {
    let n = a.size();
    let mut h = a.rows();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let t = h[m][m - 1].clone();
        for i in (m + 1)..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = &h[i][m - 1] / &t;
            for j in 0..n {
                let delta = &u * &h[m][j];
                h[i][j] -= delta;
            }
            for row in h.iter_mut() {
                let delta = &u * &row[i];
                row[m] += delta;
            }
        }
    }

    // p_m = (x − h_mm) p_{m−1} − Σ_{i=1}^{m−1} h_{m−i,m} (Π_{j=m−i+1}^{m} h_{j,j−1}) p_{m−i−1}
    let hh = |i: usize, j: usize| &h[i - 1][j - 1];
    let mut ps = vec![Poly::one()];
    for m in 1..=n {
        let mut p = Poly::linear(hh(m, m).clone()).mul(&ps[m - 1]);
        let mut t = Rational::one();
        for i in 1..m {
            t *= hh(m - i + 1, m - i);
            if t.is_zero() {
                break;
            }
            let coeff = &t * hh(m - i, m);
            p = p.sub(&ps[m - i - 1].scale(&coeff));
        }
        ps.push(p);
    }
    ps.pop().expect("p_0 exists")
}

/// Converts an integer-valued matrix for exact processing.
pub fn integer_matrix(rows: &[Vec<i64>]) -> Matrix<Rational> {
    Matrix::from_fn(rows.len(), |i, j| {
        Rational::from_integer(BigInt::from(rows[i][j]))
    })
}

/// Rank of a rational matrix by exact elimination.
pub fn rank(a: &Matrix<Rational>) -> usize {
    let mut m = a.rows();
    let n = a.size();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for r in (rank + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[rank][col];
            for c in col..n {
                let delta = &f * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}
