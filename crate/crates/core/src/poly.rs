//! Dense univariate polynomials over a [`Field`].

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Rem, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{prime_divisors, Fe, Field};

/// Polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}

impl Eq for Poly {}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.field, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for i in (0..self.c.len()).rev() {
            let c = self.c[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if i == 0 {
                k.write_element(f, c)?;
                continue;
            }
            if c != Fe::ONE {
                if k.as_prime_residue(c).is_some() || k.is_monomial_element(c) {
                    k.write_element(f, c)?;
                    f.write_str("*")?;
                } else {
                    f.write_str("(")?;
                    k.write_element(f, c)?;
                    f.write_str(")*")?;
                }
            }
            f.write_str("x")?;
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        Ok(())
    }
}

fn trim(c: &mut Vec<Fe>) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

/// Lazy-reduction threshold: products of residues below this fit in u32.
const LAZY_PRIME: u32 = 1 << 16;

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        trim(&mut coeffs);
        Poly { field: field.clone(), c: coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn monomial(field: &Field, c: Fe, k: usize) -> Poly {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&v| field.from_int(v)).collect())
    }

    /// Parses the polynomial text grammar, e.g. `x^4+2*x^2+1` or
    /// `(t+1)*x^2+t`.
    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        crate::ratfrac::parse_poly(field, text)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub(crate) fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Fe::ONE
    }

    pub fn hamming_weight(&self) -> usize {
        self.c.iter().filter(|c| !c.is_zero()).count()
    }

    fn check(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields: {:?} vs {:?}", self.field, other.field);
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let k = &self.field;
        let (long, short) = if self.c.len() >= other.c.len() { (self, other) } else { (other, self) };
        let mut c = long.c.clone();
        for (a, &b) in c.iter_mut().zip(&short.c) {
            *a = k.add(*a, b);
        }
        Poly::new(k, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check(other);
        let k = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(k, c)
    }

    pub fn neg(&self) -> Poly {
        let k = &self.field;
        Poly { field: k.clone(), c: self.c.iter().map(|&a| k.neg(a)).collect() }
    }

    pub fn scale(&self, s: Fe) -> Poly {
        let k = &self.field;
        Poly::new(k, self.c.iter().map(|&a| k.mul(a, s)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        Poly { field: self.field.clone(), c }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(k);
        }
        let n = self.c.len() + other.c.len() - 1;
        if k.is_prime_field() && k.characteristic() < LAZY_PRIME {
            let p = k.characteristic() as u64;
            let mut acc = vec![0u64; n];
            for (i, a) in self.c.iter().enumerate() {
                let a = a.index() as u64;
                if a == 0 {
                    continue;
                }
                for (j, b) in other.c.iter().enumerate() {
                    acc[i + j] += a * b.index() as u64;
                }
            }
            let c = acc.into_iter().map(|v| Fe::from_index((v % p) as u32)).collect();
            return Poly::new(k, c);
        }
        let mut c = vec![Fe::ZERO; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        Poly::new(k, c)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_rem_nonzero(d, true))
    }

    fn div_rem_nonzero(&self, d: &Poly, want_quotient: bool) -> (Poly, Poly) {
        let k = &self.field;
        let m = d.deg();
        if self.c.len() < d.c.len() {
            return (Poly::zero(k), self.clone());
        }
        let inv = k.inv_nonzero(d.leading_coeff());
        let mut r = self.c.clone();
        let mut q = if want_quotient { vec![Fe::ZERO; self.c.len() - m] } else { Vec::new() };
        if k.is_prime_field() {
            let p = k.characteristic() as u64;
            let inv = inv.index() as u64;
            let dd: Vec<u64> = d.c.iter().map(|v| v.index() as u64).collect();
            let mut rr: Vec<u64> = r.iter().map(|v| v.index() as u64).collect();
            for top in (m..rr.len()).rev() {
                let coef = rr[top] * inv % p;
                if coef == 0 {
                    continue;
                }
                if want_quotient {
                    q[top - m] = Fe::from_index(coef as u32);
                }
                let neg = p - coef;
                let base = top - m;
                for i in 0..m {
                    rr[base + i] = (rr[base + i] + neg * dd[i]) % p;
                }
                rr[top] = 0;
            }
            rr.truncate(m);
            r = rr.into_iter().map(|v| Fe::from_index(v as u32)).collect();
        } else {
            for top in (m..r.len()).rev() {
                let coef = k.mul(r[top], inv);
                if coef.is_zero() {
                    continue;
                }
                if want_quotient {
                    q[top - m] = coef;
                }
                let base = top - m;
                for i in 0..m {
                    r[base + i] = k.sub(r[base + i], k.mul(coef, d.c[i]));
                }
                r[top] = Fe::ZERO;
            }
            r.truncate(m);
        }
        (Poly::new(k, q), Poly::new(k, r))
    }

    /// Remainder; panics on a zero divisor like integer `%`.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.check(d);
        assert!(!d.is_zero(), "polynomial remainder by zero");
        self.div_rem_nonzero(d, false).1
    }

    /// Exact quotient; panics on a zero divisor.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        self.check(d);
        assert!(!d.is_zero(), "polynomial division by zero");
        let (q, r) = self.div_rem_nonzero(d, true);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field.inv_nonzero(self.leading_coeff()))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` the monic gcd.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        self.check(other);
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem_nonzero(&r1, true);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv_nonzero(r0.leading_coeff());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.field;
        if self.c.len() <= 1 {
            return Poly::zero(k);
        }
        let c = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, &a)| k.mul(k.from_int(i as i64 + 1), a))
            .collect();
        Poly::new(k, c)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let k = &self.field;
        self.c.iter().rev().fold(Fe::ZERO, |acc, &a| k.add(k.mul(acc, x), a))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.check(g);
        let k = &self.field;
        let mut acc = Poly::zero(k);
        for &a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(k, a));
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self^(q^k) mod m` by repeated `q`-th powering.
    fn frobenius_pow_mod(&self, k: usize, m: &Poly) -> Poly {
        let q = self.field.order() as u64;
        let mut a = self.rem(m);
        for _ in 0..k {
            a = a.powmod(q, m);
        }
        a
    }

    /// Irreducibility over the coefficient field by Rabin's criterion:
    /// `x^(q^n) = x mod f` and `gcd(x^(q^(n/l)) - x, f) = 1` for every prime
    /// `l | n`. Frobenius powers are produced by a precomputed Frobenius
    /// matrix.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        if f.c[0].is_zero() {
            return Ok(false);
        }
        let k = &self.field;
        let frob = FrobeniusMatrix::new(&f);
        let checkpoints: Vec<usize> = prime_divisors(n as u64).into_iter().map(|l| n / l as usize).collect();
        let mut x = vec![Fe::ZERO; n];
        x[1] = Fe::ONE;
        let xp = Poly::x(k);
        let mut cur = x.clone();
        for step in 1..=n {
            cur = frob.apply(&cur);
            if step < n && cur == x {
                return Ok(false);
            }
            if checkpoints.contains(&step) {
                let g = Poly::new(k, cur.clone()).sub(&xp).gcd(&f);
                if !g.is_one() {
                    return Ok(false);
                }
            }
        }
        Ok(cur == x)
    }

    /// Distinct roots in the coefficient field, in canonical order.
    pub fn roots(&self) -> Vec<Fe> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let k = &self.field;
        let f = self.monic();
        let x = Poly::x(k);
        let xq = x.powmod(k.order() as u64, &f);
        let g = xq.sub(&x).gcd(&f);
        if g.deg() == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut out: Vec<Fe> = g.equal_degree(1, &mut rng).into_iter().map(|l| k.neg(l.c[0])).collect();
        out.sort();
        out
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// using a fixed internal seed.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        self.factor_with(&mut ChaCha8Rng::seed_from_u64(0))
    }

    /// Square-free decomposition, distinct-degree and equal-degree splitting.
    /// The leading coefficient is dropped; factors come back sorted by
    /// degree and then coefficients.
    pub fn factor_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(Poly, usize)>> {
        if self.deg() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let mut out = Vec::new();
        for (g, m) in self.monic().squarefree_decomposition() {
            for (h, d) in g.distinct_degree() {
                for e in h.equal_degree(d, rng) {
                    out.push((e, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0).cmp(&(b.0.deg(), &b.0)));
        Ok(out)
    }

    /// Coefficient-wise `p`-th root of a polynomial in `x^p`.
    fn pth_root(&self) -> Poly {
        let k = &self.field;
        let p = k.characteristic() as usize;
        let e = (k.order() / k.characteristic()) as u64;
        let c = self.c.iter().step_by(p).map(|&a| k.pow(a, e)).collect();
        Poly::new(k, c)
    }

    /// Square-free parts of a monic polynomial, `(g_i, i)` with `f = prod g_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let f = self.monic();
        if f.deg() == 0 {
            return out;
        }
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_exact(&c);
        let mut i = 1;
        while w.deg() > 0 {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y);
            if fac.deg() > 0 {
                out.push((fac, i));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if c.deg() > 0 {
            let p = self.field.characteristic() as usize;
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// Splits a monic square-free polynomial into `(product of all its
    /// irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let k = &self.field;
        let mut out = Vec::new();
        let mut rest = self.monic();
        let x = Poly::x(k);
        let q = k.order() as u64;
        let mut h = x.clone();
        let mut d = 1;
        while rest.deg() >= 2 * d {
            h = h.powmod(q, &rest);
            let g = h.sub(&x).gcd(&rest);
            if g.deg() > 0 {
                rest = rest.div_exact(&g);
                h = h.rem(&rest);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.deg() > 0 {
            let d = rest.deg();
            out.push((rest, d));
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a monic product of distinct degree-`d`
    /// irreducibles.
    pub fn equal_degree<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = self.deg();
        if n == d {
            return vec![self.monic()];
        }
        let k = &self.field;
        let q = k.order();
        loop {
            let a = Poly::new(k, (0..n).map(|_| Fe::from_index(rng.gen_range(0..q))).collect());
            if a.deg() == 0 {
                continue;
            }
            let g0 = a.gcd(self);
            if g0.deg() > 0 && g0.deg() < n {
                return self.split_into(&g0, d, rng);
            }
            let b = if k.characteristic() == 2 {
                let steps = k.degree() * d;
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = t.mulmod(&t, self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let mut norm = a.rem(self);
                let mut conj = norm.clone();
                for _ in 1..d {
                    conj = conj.frobenius_pow_mod(1, self);
                    norm = norm.mulmod(&conj, self);
                }
                norm.powmod((q as u64 - 1) / 2, self).sub(&Poly::one(k))
            };
            let g = b.gcd(self);
            if g.deg() > 0 && g.deg() < n {
                return self.split_into(&g, d, rng);
            }
        }
    }

    fn split_into<R: Rng + ?Sized>(&self, g: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
        let mut out = g.equal_degree(d, rng);
        out.extend(self.div_exact(g).equal_degree(d, rng));
        out
    }
}

/// Matrix of the `F_q`-linear map `a -> a^q` on `F_q[x]/(f)`; row `i` holds
/// `x^(iq) mod f`.
struct FrobeniusMatrix {
    field: Field,
    rows: Vec<Vec<Fe>>,
}

impl FrobeniusMatrix {
    fn new(f: &Poly) -> FrobeniusMatrix {
        let k = f.field();
        let n = f.deg();
        let q = k.order() as u64;
        let xq = Poly::x(k).powmod(q, f);
        let mut rows = Vec::with_capacity(n);
        let mut cur = Poly::one(k);
        for i in 0..n {
            let mut r = cur.c.clone();
            r.resize(n, Fe::ZERO);
            rows.push(r);
            if i + 1 < n {
                cur = if (q as usize) < n { cur.shift(q as usize).rem(f) } else { cur.mulmod(&xq, f) };
            }
        }
        FrobeniusMatrix { field: k.clone(), rows }
    }

    fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        let k = &self.field;
        let n = v.len();
        if k.is_prime_field() && k.characteristic() < LAZY_PRIME {
            let p = k.characteristic() as u64;
            let mut acc = vec![0u64; n];
            for (row, a) in self.rows.iter().zip(v) {
                let a = a.index() as u64;
                if a == 0 {
                    continue;
                }
                for (s, b) in acc.iter_mut().zip(row) {
                    *s += a * b.index() as u64;
                }
            }
            return acc.into_iter().map(|s| Fe::from_index((s % p) as u32)).collect();
        }
        let mut acc = vec![Fe::ZERO; n];
        for (row, &a) in self.rows.iter().zip(v) {
            if a.is_zero() {
                continue;
            }
            for (s, &b) in acc.iter_mut().zip(row) {
                *s = k.add(*s, k.mul(a, b));
            }
        }
        acc
    }
}

/// Resultant `Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r)`.
pub fn resultant(a: &Poly, b: &Poly) -> Fe {
    a.check(b);
    let k = a.field().clone();
    if a.is_zero() || b.is_zero() {
        return Fe::ZERO;
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = Fe::ONE;
    loop {
        let (da, db) = (a.deg(), b.deg());
        if db == 0 {
            return k.mul(acc, k.pow(b.leading_coeff(), da as u64));
        }
        if da == 0 {
            return k.mul(acc, k.pow(a.leading_coeff(), db as u64));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Fe::ZERO;
        }
        if (da * db) % 2 == 1 {
            acc = k.neg(acc);
        }
        acc = k.mul(acc, k.pow(b.leading_coeff(), (da - r.deg()) as u64));
        a = b;
        b = r;
    }
}

fn mobius_mu(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree `d` over `F_q`:
/// `(1/d) * sum_{e | d} mu(e) q^(d/e)`.
pub fn count_monic_irreducible(q: u64, d: usize) -> u64 {
    let d64 = d as u64;
    let mut total: i128 = 0;
    for e in 1..=d64 {
        if d64 % e == 0 {
            total += mobius_mu(e) as i128 * (q as i128).pow((d64 / e) as u32);
        }
    }
    (total / d as i128) as u64
}

/// Iterator over all monic irreducibles of a fixed degree, ordered by the
/// integer `sum c_i q^i` of their lower coefficients.
pub struct MonicIrreducibles {
    field: Field,
    d: usize,
    next: u64,
    end: u64,
}

impl Iterator for MonicIrreducibles {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let q = self.field.order() as u64;
        while self.next < self.end {
            let mut v = self.next;
            self.next += 1;
            if self.d > 1 && v % q == 0 {
                continue;
            }
            let mut c = Vec::with_capacity(self.d + 1);
            for _ in 0..self.d {
                c.push(Fe::from_index((v % q) as u32));
                v /= q;
            }
            c.push(Fe::ONE);
            let f = Poly::new(&self.field, c);
            if f.is_irreducible().unwrap_or(false) {
                return Some(f);
            }
        }
        None
    }
}

/// Enumerates every monic irreducible of degree `d` exactly once, refusing
/// when `q^d` exceeds `cap`.
pub fn enumerate_monic_irreducible(field: &Field, d: usize, cap: u64) -> Result<MonicIrreducibles> {
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let q = field.order() as u64;
    let total = q.checked_pow(d as u32).unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::BudgetExceeded { what: "monic polynomial enumeration", needed: total, cap });
    }
    Ok(MonicIrreducibles { field: field.clone(), d, next: 0, end: total })
}

/// Uniform random monic irreducible of degree `d` by rejection sampling.
pub fn random_monic_irreducible<R: Rng + ?Sized>(field: &Field, d: usize, rng: &mut R) -> Result<Poly> {
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let q = field.order();
    loop {
        let mut c: Vec<Fe> = (0..d).map(|_| Fe::from_index(rng.gen_range(0..q))).collect();
        c.push(Fe::ONE);
        let f = Poly::new(field, c);
        if f.is_irreducible()? {
            return Ok(f);
        }
    }
}

/// Seeded convenience wrapper around [`random_monic_irreducible`].
pub fn random_monic_irreducible_seeded(field: &Field, d: usize, seed: u64) -> Result<Poly> {
    random_monic_irreducible(field, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl<'a> Rem<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn rem(self, rhs: &'a Poly) -> Poly {
        Poly::rem(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, prop_assert, prop_assume, proptest, ProptestConfig};

    fn fld(p: u32, n: usize) -> Field {
        Field::new(p, n).unwrap()
    }

    fn p(k: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(k, c)
    }

    /// Trial division by every monic polynomial of degree <= n/2.
    fn brute_irreducible(f: &Poly) -> bool {
        let k = f.field();
        let n = f.deg();
        let q = k.order() as u64;
        for d in 1..=n / 2 {
            for v in 0..q.pow(d as u32) {
                let mut c = Vec::new();
                let mut r = v;
                for _ in 0..d {
                    c.push(Fe::from_index((r % q) as u32));
                    r /= q;
                }
                c.push(Fe::ONE);
                if f.rem(&Poly::new(k, c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn module_examples() {
        let f3 = fld(3, 1);
        let f = p(&f3, &[1, 0, 0, 0, 1]);
        assert_eq!(f.derivative(), p(&f3, &[0, 0, 0, 1]));
        assert!(f.gcd(&f.derivative()).is_one());
        let x3 = p(&f3, &[0, 0, 0, 1]);
        let (q, r) = x3.div_rem(&Poly::x(&f3)).unwrap();
        assert_eq!(q, p(&f3, &[0, 0, 1]));
        assert!(r.is_zero());
        let f2 = fld(2, 1);
        assert_eq!(p(&f2, &[1, 1, 1]).eval(Fe::ONE), Fe::ONE);
        assert_eq!(x3.div_rem(&Poly::zero(&f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = fld(2, 1);
        let f3 = fld(3, 1);
        assert!(p(&f2, &[1, 1, 1]).is_irreducible().unwrap());
        assert!(!p(&f3, &[1, 0, 0, 0, 1]).is_irreducible().unwrap());
        assert!(p(&f3, &[1, 1, 1, 1, 1]).is_irreducible().unwrap());
        assert_eq!(p(&f3, &[2]).is_irreducible(), Err(Error::ConstantPolynomial));
        assert_eq!(Poly::zero(&f3).is_irreducible(), Err(Error::ConstantPolynomial));
        // Leading coefficient does not matter.
        assert!(p(&f3, &[2, 2, 2, 2, 2]).is_irreducible().unwrap());
    }

    #[test]
    fn factor_examples() {
        let f3 = fld(3, 1);
        let fs = p(&f3, &[1, 0, 0, 0, 1]).factor().unwrap();
        assert_eq!(fs, vec![(p(&f3, &[2, 1, 1]), 1), (p(&f3, &[2, 2, 1]), 1)]);
        // The product check for the example, computed by hand mod 3.
        assert_eq!(p(&f3, &[2, 1, 1]).mul(&p(&f3, &[2, 2, 1])), p(&f3, &[1, 0, 0, 0, 1]));
        let x2 = p(&f3, &[0, 0, 1]);
        assert_eq!(x2.factor().unwrap(), vec![(Poly::x(&f3), 2)]);
        let fs = p(&f3, &[0, 1, 0, 1]).factor().unwrap();
        assert_eq!(fs, vec![(Poly::x(&f3), 1), (p(&f3, &[1, 0, 1]), 1)]);
        // Inseparable powers in characteristic 2 and 3; x^2+x+1 splits over F_4.
        let f2 = fld(2, 2);
        let t = f2.t();
        let g = Poly::new(&f2, vec![t, Fe::ONE]).pow(4).mul(&Poly::new(&f2, vec![Fe::ONE, Fe::ONE, Fe::ONE]));
        let fs = g.factor().unwrap();
        assert_eq!(fs.iter().map(|(_, m)| *m).collect::<Vec<_>>(), vec![5, 1]);
        let prod = fs.iter().fold(Poly::one(&f2), |acc, (h, m)| acc.mul(&h.pow(*m as u64)));
        assert_eq!(prod, g);
        let h = p(&f3, &[1, 1, 0, 2, 0, 0, 1]).pow(3);
        let fs = h.factor().unwrap();
        assert!(fs.iter().all(|(_, m)| *m % 3 == 0));
    }

    #[test]
    fn enumeration_examples() {
        let f3 = fld(3, 1);
        let all: Vec<Poly> = enumerate_monic_irreducible(&f3, 2, 1000).unwrap().collect();
        assert_eq!(all, vec![p(&f3, &[1, 0, 1]), p(&f3, &[2, 1, 1]), p(&f3, &[2, 2, 1])]);
        let f2 = fld(2, 1);
        let all: Vec<Poly> = enumerate_monic_irreducible(&f2, 2, 1000).unwrap().collect();
        assert_eq!(all, vec![p(&f2, &[1, 1, 1])]);
        assert_eq!(enumerate_monic_irreducible(&f3, 6, 1_000_000).unwrap().count(), 116);
        assert_eq!(count_monic_irreducible(3, 6), (729 - 27 - 9 + 3) / 6);
        assert!(matches!(enumerate_monic_irreducible(&f3, 20, 1_000_000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn necklace_counts() {
        for q in [2u32, 3, 5] {
            let k = fld(q, 1);
            for d in 1..=6 {
                let cap = 20_000;
                if (q as u64).pow(d as u32) > cap {
                    continue;
                }
                let n = enumerate_monic_irreducible(&k, d, cap).unwrap().count() as u64;
                assert_eq!(n, count_monic_irreducible(q as u64, d), "q={q} d={d}");
            }
        }
        let k = fld(2, 2);
        assert_eq!(enumerate_monic_irreducible(&k, 3, 1000).unwrap().count() as u64, count_monic_irreducible(4, 3));
    }

    #[test]
    fn irreducible_matches_trial_division() {
        for (pp, n) in [(2u32, 1usize), (3, 1), (2, 2)] {
            let k = fld(pp, n);
            let q = k.order() as u64;
            for d in 1..=4usize {
                for v in 0..q.pow(d as u32) {
                    let mut c = Vec::new();
                    let mut r = v;
                    for _ in 0..d {
                        c.push(Fe::from_index((r % q) as u32));
                        r /= q;
                    }
                    c.push(Fe::ONE);
                    let f = Poly::new(&k, c);
                    let irr = f.is_irreducible().unwrap();
                    assert_eq!(irr, brute_irreducible(&f), "{f}");
                    let fs = f.factor().unwrap();
                    assert_eq!(irr, fs.len() == 1 && fs[0].1 == 1, "{f}");
                }
            }
        }
    }

    #[test]
    fn random_irreducible_determinism() {
        let f2 = fld(2, 1);
        assert_eq!(random_monic_irreducible_seeded(&f2, 2, 7).unwrap(), p(&f2, &[1, 1, 1]));
        let k = fld(7, 1);
        let a = random_monic_irreducible_seeded(&k, 5, 3).unwrap();
        let b = random_monic_irreducible_seeded(&k, 5, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.is_irreducible().unwrap());
    }

    #[test]
    fn roots_and_resultant() {
        let f7 = fld(7, 1);
        let f = p(&f7, &[6, 0, 1]).mul(&p(&f7, &[3, 1]));
        let r: Vec<u32> = f.roots().into_iter().map(|x| x.index()).collect();
        assert_eq!(r, vec![1, 4, 6]);
        // Res(x^2+1, x-a) = a^2 + 1 for monic first argument.
        let g = p(&f7, &[1, 0, 1]);
        for a in 0..7 {
            let h = p(&f7, &[-a, 1]);
            assert_eq!(resultant(&g, &h), f7.from_int(a * a + 1));
        }
        let f8 = fld(2, 3);
        let m = Poly::new(&f8, f8.modulus().iter().map(|&c| f8.from_int(c as i64)).collect());
        assert_eq!(m.roots().len(), 3);
    }

    #[test]
    fn display() {
        let f5 = fld(5, 1);
        assert_eq!(p(&f5, &[0, 1, 0, 0, 0, 2]).to_string(), "2*x^5+x");
        let f4 = fld(2, 2);
        let t = f4.t();
        let f = Poly::new(&f4, vec![t, Fe::ZERO, f4.add(t, Fe::ONE)]);
        assert_eq!(f.to_string(), "(t+1)*x^2+t");
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixed_fields_panic() {
        let _ = Poly::x(&fld(3, 1)).add(&Poly::x(&fld(5, 1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn factor_inverts_multiplication(seed in any::<u64>(), which in 0usize..3) {
            let k = [fld(3, 1), fld(5, 1), fld(2, 2)][which].clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let parts: Vec<Poly> = (0..3)
                .map(|_| {
                    let d = rng.gen_range(1..4);
                    random_monic_irreducible(&k, d, &mut rng).unwrap()
                })
                .collect();
            let prod = parts.iter().fold(Poly::one(&k), |a, b| a.mul(b));
            let fs = prod.factor_with(&mut rng).unwrap();
            let mut expect: Vec<Poly> = parts.clone();
            expect.sort_by(|a, b| (a.deg(), a).cmp(&(b.deg(), b)));
            let mut got: Vec<Poly> = fs.iter().flat_map(|(h, m)| core::iter::repeat(h.clone()).take(*m)).collect();
            got.sort_by(|a, b| (a.deg(), a).cmp(&(b.deg(), b)));
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn division_identity(a in proptest::collection::vec(0u32..5, 0..12), b in proptest::collection::vec(0u32..5, 1..8)) {
            let k = fld(5, 1);
            let a = Poly::new(&k, a.into_iter().map(Fe::from_index).collect());
            let b = Poly::new(&k, b.into_iter().map(Fe::from_index).collect());
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a.clone());
            prop_assert!(r.is_zero() || r.deg() < b.deg());
            let (g, s, t) = a.xgcd(&b);
            prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g.clone());
            prop_assert_eq!(g, a.gcd(&b));
        }
    }
}
