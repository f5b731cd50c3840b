//! Prime and extension fields `F_{p^n}`.
//!
//! An element is stored as the integer `sum c_i p^i` of its coefficient
//! vector in the power basis `1, t, ..., t^{n-1}`, where `t` is a root of the
//! field's modulus. That integer doubles as the canonical element order used
//! for every deterministic tie-break in the crate.
//!
//! Small extension fields use exponent/Zech-logarithm tables; larger ones
//! fall back to coefficient-vector arithmetic.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::poly::Poly;

pub const MAX_EXTENSION_DEGREE: usize = 32;
const MAX_ORDER: u64 = 1 << 31;
const TABLE_LIMIT: u32 = 1 << 16;
const NO_LOG: u32 = u32::MAX;

/// A field element, meaningful only together with its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The element whose canonical index is `v`. The caller guarantees
    /// `v < q`.
    pub const fn from_index(v: u32) -> Fe {
        Fe(v)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

struct Inner {
    p: u32,
    n: usize,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
}

/// Description of `F_{p^n}` with its canonical modulus. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.n == other.0.n)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.n)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.n)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^n`, returning `None` for anything else.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        n += 1;
    }
    Some((p as u32, n))
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

impl Field {
    /// Builds `F_{p^n}` with the canonical modulus: the monic irreducible of
    /// degree `n` whose coefficient sequence `(a_0, ..., a_{n-1})` is
    /// lexicographically least. For `n = 1` the modulus is `x`.
    pub fn new(p: u32, n: usize) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 || n > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidExtensionDegree(n));
        }
        let q = (p as u64).checked_pow(n as u32).filter(|&q| q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, n });
        };
        let pow_p: Vec<u32> = (0..=n).map(|i| (p as u64).pow(i as u32) as u32).collect();
        if n == 1 {
            return Ok(Field(Arc::new(Inner {
                p,
                n,
                q: q as u32,
                modulus: vec![0, 1],
                pow_p,
                tables: None,
            })));
        }
        let modulus = canonical_modulus(p, n)?;
        let mut inner = Inner { p, n, q: q as u32, modulus, pow_p, tables: None };
        if inner.q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Parses a prime power `q` or `p^n`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        let bad = |_| Error::parse(0, "expected `q` or `p^n`");
        match s.split_once('^') {
            Some((p, n)) => Field::new(p.trim().parse().map_err(bad)?, n.trim().parse().map_err(bad)?),
            None => Field::with_order(s.parse().map_err(bad)?),
        }
    }

    /// `F_q` for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Field> {
        match prime_power(q) {
            Some((p, n)) => Field::new(p, n),
            None => Err(Error::NotPrime(q)),
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.n == 1
    }

    /// Coefficients of the modulus, lowest degree first (monic, length `n+1`).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn same_field(&self, other: &Field) -> bool {
        self == other
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The root `t` of the modulus (for prime fields the modulus is `x` and
    /// `t = 0`).
    pub fn t(&self) -> Fe {
        if self.0.n == 1 {
            Fe::ZERO
        } else {
            Fe(self.0.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given power-basis coefficients (reduced mod p).
    pub fn from_digits(&self, digits: &[u32]) -> Fe {
        let mut v = 0u32;
        for (i, &d) in digits.iter().enumerate().take(self.0.n) {
            v += (d % self.0.p) * self.0.pow_p[i];
        }
        Fe(v)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut d = [0u32; MAX_EXTENSION_DEGREE];
        self.decode(a, &mut d);
        d[..self.0.n].to_vec()
    }

    /// Residue in `[0, p)` when `a` lies in the prime subfield.
    pub fn as_prime_residue(&self, a: Fe) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    #[inline]
    fn decode(&self, a: Fe, out: &mut [u32; MAX_EXTENSION_DEGREE]) {
        let p = self.0.p;
        let mut v = a.0;
        for d in out.iter_mut().take(self.0.n) {
            *d = v % p;
            v /= p;
        }
    }

    #[inline]
    fn encode(&self, d: &[u32]) -> Fe {
        let mut v = 0u32;
        for i in (0..self.0.n).rev() {
            v = v * self.0.p + d[i];
        }
        Fe(v)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.n == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= f.p { s - f.p } else { s });
        }
        if f.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if let Some(t) = &f.tables {
            if a.0 == 0 {
                return b;
            }
            if b.0 == 0 {
                return a;
            }
            let m = f.q - 1;
            let la = t.log[a.0 as usize];
            let lb = t.log[b.0 as usize];
            let d = if lb >= la { lb - la } else { lb + m - la };
            let z = t.zech[d as usize];
            if z == NO_LOG {
                return Fe::ZERO;
            }
            return Fe(t.exp[(la + z) as usize]);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let mut da = [0u32; MAX_EXTENSION_DEGREE];
        let mut db = [0u32; MAX_EXTENSION_DEGREE];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        for i in 0..self.0.n {
            da[i] = (da[i] + db[i]) % p;
        }
        self.encode(&da)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let f = &*self.0;
        if a.0 == 0 {
            return a;
        }
        if f.n == 1 {
            return Fe(f.p - a.0);
        }
        if f.p == 2 {
            return a;
        }
        let p = f.p;
        let mut da = [0u32; MAX_EXTENSION_DEGREE];
        self.decode(a, &mut da);
        for d in da.iter_mut().take(f.n) {
            *d = (p - *d) % p;
        }
        self.encode(&da)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.n == 1 {
            return Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + f.p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.n == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % f.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &f.tables {
            return Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let n = self.0.n;
        let p = self.0.p as u64;
        let mut da = [0u32; MAX_EXTENSION_DEGREE];
        let mut db = [0u32; MAX_EXTENSION_DEGREE];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let mut prod = [0u64; 2 * MAX_EXTENSION_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let s = c * m[i] as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - s) % p;
            }
        }
        let mut out = [0u32; MAX_EXTENSION_DEGREE];
        for i in 0..n {
            out[i] = prod[i] as u32;
        }
        self.encode(&out)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if let Some(t) = &self.0.tables {
            if a.0 == 0 {
                return if e == 0 { Fe::ONE } else { Fe::ZERO };
            }
            let m = (self.0.q - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (e % m)) % m;
            return Fe(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Fe) -> Fe {
        debug_assert!(a.0 != 0);
        let f = &*self.0;
        if f.n == 1 {
            return Fe(inv_mod(a.0, f.p));
        }
        if let Some(t) = &f.tables {
            let m = f.q - 1;
            let la = t.log[a.0 as usize];
            return Fe(t.exp[((m - la) % m) as usize]);
        }
        self.pow(a, f.q as u64 - 2)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// Trace from `F_{p^n}` down to `F_p`, as a residue in `[0, p)`.
    pub fn absolute_trace(&self, a: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut c = a;
        for _ in 0..self.0.n {
            acc = self.add(acc, c);
            c = self.frobenius(c);
        }
        debug_assert!(acc.0 < self.0.p);
        acc.0
    }

    /// Quadratic character: `1` for nonzero squares, `-1` for non-squares,
    /// `0` for zero. Every element is a square in characteristic 2.
    pub fn quadratic_character(&self, a: Fe) -> i8 {
        if a.0 == 0 {
            return 0;
        }
        if self.0.p == 2 {
            return 1;
        }
        if self.pow(a, (self.0.q as u64 - 1) / 2) == Fe::ONE {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.quadratic_character(a) >= 0
    }

    /// Square root of `a`, choosing the canonically least of the two roots;
    /// `None` when `a` is not a square.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(a);
        }
        let q = self.0.q as u64;
        if self.0.p == 2 {
            return Some(self.pow(a, q / 2));
        }
        if self.quadratic_character(a) != 1 {
            return None;
        }
        // Tonelli-Shanks
        let mut s = 0;
        let mut odd = q - 1;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(2)
            .find(|&z| self.quadratic_character(z) == -1)
            .expect("odd field has a non-square");
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, (odd + 1) / 2);
        while t != Fe::ONE {
            let mut i = 0;
            let mut tt = t;
            while tt != Fe::ONE {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        let nr = self.neg(r);
        Some(if nr < r { nr } else { r })
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fe) -> u64 {
        let mut ord = self.0.q as u64 - 1;
        for r in prime_divisors(ord) {
            while ord % r == 0 && self.pow(a, ord / r) == Fe::ONE {
                ord /= r;
            }
        }
        ord
    }

    /// Human-readable element: an integer in the prime subfield, otherwise a
    /// polynomial in `t`, e.g. `t+1` or `2*t^2+t`.
    pub fn format_element(&self, a: Fe) -> String {
        let mut s = String::new();
        self.write_element(&mut s, a).expect("writing to a String");
        s
    }

    pub(crate) fn write_element<W: Write>(&self, w: &mut W, a: Fe) -> fmt::Result {
        if self.0.n == 1 || a.0 < self.0.p {
            return write!(w, "{}", a.0);
        }
        let d = self.digits(a);
        let mut first = true;
        for i in (0..d.len()).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            if !first {
                w.write_char('+')?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(w, "{c}")?,
                (_, 1) => w.write_char('t')?,
                (_, c) => write!(w, "{c}*t")?,
            }
            if i > 1 {
                write!(w, "^{i}")?;
            }
        }
        Ok(())
    }

    /// Whether the element prints as a single term (no `+`).
    pub(crate) fn is_monomial_element(&self, a: Fe) -> bool {
        self.digits(a).iter().filter(|&&d| d != 0).count() <= 1
    }
}

fn canonical_modulus(p: u32, n: usize) -> Result<Vec<u32>> {
    let base = Field::new(p, 1)?;
    let total = (p as u64).pow(n as u32);
    // Coefficient a_0 is the most significant digit of the scan index, so the
    // scan follows lexicographic order on (a_0, ..., a_{n-1}). a_0 = 0 is
    // divisible by x and skipped.
    let first = (p as u64).pow(n as u32 - 1);
    for v in first..total {
        let mut coeffs = vec![0u32; n + 1];
        let mut r = v;
        for i in (0..n).rev() {
            coeffs[i] = (r % p as u64) as u32;
            r /= p as u64;
        }
        coeffs[n] = 1;
        let f = Poly::new(&base, coeffs.iter().map(|&c| Fe(c)).collect());
        if f.is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::Internal("no irreducible modulus found"))
}

fn build_tables(inner: &Inner) -> Tables {
    // Slow-path arithmetic on a table-less handle to bootstrap the tables.
    let tmp = Field(Arc::new(Inner {
        p: inner.p,
        n: inner.n,
        q: inner.q,
        modulus: inner.modulus.clone(),
        pow_p: inner.pow_p.clone(),
        tables: None,
    }));
    let q = inner.q;
    let m = q - 1;
    let g = (1..q)
        .map(Fe)
        .find(|&g| tmp.multiplicative_order(g) == m as u64)
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * m as usize];
    let mut log = vec![NO_LOG; q as usize];
    let mut cur = Fe::ONE;
    for i in 0..m {
        exp[i as usize] = cur.0;
        exp[(i + m) as usize] = cur.0;
        log[cur.0 as usize] = i;
        cur = tmp.mul_slow(cur, g);
    }
    let zech = (0..m)
        .map(|k| {
            let s = tmp.add_slow(Fe::ONE, Fe(exp[k as usize]));
            if s.0 == 0 {
                NO_LOG
            } else {
                log[s.0 as usize]
            }
        })
        .collect();
    Tables { exp, log, zech }
}

/// Injective ring morphism `F_{p^r} -> F_{p^{rm}}`, sending the source
/// generator `t` to the canonically least root of the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    basis: Vec<Fe>,
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0 {
            return Err(Error::IncompatibleFields);
        }
        let basis = if src.degree() == 1 {
            vec![Fe::ONE]
        } else {
            let m = Poly::new(dst, src.modulus().iter().map(|&c| dst.from_int(c as i64)).collect());
            let root = *m.roots().first().ok_or(Error::Internal("modulus has no root in extension"))?;
            let mut basis = Vec::with_capacity(src.degree());
            let mut cur = Fe::ONE;
            for _ in 0..src.degree() {
                basis.push(cur);
                cur = dst.mul(cur, root);
            }
            basis
        };
        Ok(Embedding { src: src.clone(), dst: dst.clone(), basis })
    }

    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn apply(&self, a: Fe) -> Fe {
        if self.src.degree() == 1 {
            return a;
        }
        let mut acc = Fe::ZERO;
        for (d, &b) in self.src.digits(a).into_iter().zip(&self.basis) {
            if d != 0 {
                acc = self.dst.add(acc, self.dst.mul(self.dst.from_int(d as i64), b));
            }
        }
        acc
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        assert!(f.field() == &self.src, "polynomial is not over the embedding source");
        Poly::new(&self.dst, f.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32, n: usize) -> Field {
        Field::new(p, n).unwrap()
    }

    #[test]
    fn parse_orders() {
        assert_eq!(Field::parse("9").unwrap().degree(), 2);
        assert_eq!(Field::parse("3^2").unwrap(), Field::parse("9").unwrap());
        assert_eq!(Field::parse(" 7 ").unwrap().order(), 7);
        assert!(Field::parse("6").is_err());
        assert!(Field::parse("x").is_err());
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f(2, 1).modulus(), &[0, 1]);
        assert_eq!(f(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        // Brute force: the first irreducible quadratic over F_3 in lex order.
        let f3 = f(3, 1);
        let mut first = None;
        'scan: for a0 in 0..3u32 {
            for a1 in 0..3u32 {
                let roots = (0..3u32).filter(|&x| (x * x + a1 * x + a0) % 3 == 0).count();
                if roots == 0 {
                    first = Some((a0, a1));
                    break 'scan;
                }
            }
        }
        assert_eq!(first, Some((1, 0)));
        assert!(f3.is_prime_field());
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(3, 0).unwrap_err(), Error::InvalidExtensionDegree(0));
        assert!(matches!(Field::new(2, 40), Err(Error::InvalidExtensionDegree(40))));
        assert!(matches!(Field::new(65537, 3), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn small_examples() {
        let f11 = f(11, 1);
        assert_eq!(f11.inv(f11.from_int(9)).unwrap(), f11.from_int(5));
        assert_eq!(f11.inv(Fe::ZERO), Err(Error::DivisionByZero));
        let f4 = f(2, 2);
        let t = f4.t();
        assert_eq!(f4.mul(t, t), f4.add(t, Fe::ONE));
        assert_eq!(f4.format_element(f4.add(t, Fe::ONE)), "t+1");
        assert_eq!(f4.absolute_trace(Fe::ONE), 0);
        assert_eq!(f4.absolute_trace(t), 1);
        let f7 = f(7, 1);
        assert_eq!(f7.absolute_trace(f7.from_int(5)), 5);
    }

    #[test]
    fn square_roots() {
        let f11 = f(11, 1);
        assert_eq!(f11.sqrt(f11.from_int(-7)), Some(f11.from_int(2)));
        let f5 = f(5, 1);
        assert_eq!(f5.sqrt(f5.from_int(3)), None);
        assert_eq!(f5.sqrt(Fe::ZERO), Some(Fe::ZERO));
        for (p, n) in [(3, 1), (5, 1), (3, 2), (5, 2), (7, 3), (2, 3), (17, 1), (3, 11)] {
            let k = f(p, n);
            let mut squares = 0;
            for a in k.elements().take(5000) {
                if let Some(s) = k.sqrt(a) {
                    assert_eq!(k.mul(s, s), a);
                    assert!(s <= k.neg(s));
                    if !a.is_zero() {
                        squares += 1;
                    }
                }
            }
            if p != 2 && k.order() <= 5000 {
                assert_eq!(squares, (k.order() - 1) / 2);
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_only() {
        for (p, n) in [(2, 3), (3, 2), (5, 2)] {
            let k = f(p, n);
            let fixed: Vec<Fe> = k.elements().filter(|&a| k.frobenius(a) == a).collect();
            assert_eq!(fixed.len(), p as usize);
            let mut images: Vec<Fe> = k.elements().map(|a| k.frobenius(a)).collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len(), k.order() as usize);
        }
    }

    #[test]
    fn slow_and_table_paths_agree() {
        // 17^4 is above the table limit; compare against F_{17^2} inside it
        // indirectly by checking field axioms on sampled elements.
        let big = f(17, 4);
        assert!(big.0.tables.is_none());
        let small = f(3, 4);
        assert!(small.0.tables.is_some());
        let tmp = Field(Arc::new(Inner {
            p: 3,
            n: 4,
            q: 81,
            modulus: small.modulus().to_vec(),
            pow_p: small.0.pow_p.clone(),
            tables: None,
        }));
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(small.mul(a, b), tmp.mul(a, b));
                assert_eq!(small.add(a, b), tmp.add(a, b));
            }
        }
        let x = big.from_digits(&[3, 1, 4, 1]);
        assert_eq!(big.mul(x, big.inv(x).unwrap()), Fe::ONE);
        assert_eq!(big.pow(x, big.order() as u64 - 1), Fe::ONE);
    }

    #[test]
    fn embeddings() {
        let f2 = f(2, 1);
        let f4 = f(2, 2);
        let f16 = f(2, 4);
        assert_eq!(Embedding::new(&f2, &f4).unwrap().apply(Fe::ONE), Fe::ONE);
        let id = Embedding::new(&f4, &f4).unwrap();
        for a in f4.elements() {
            assert_eq!(id.apply(a), a);
        }
        let e = Embedding::new(&f4, &f16).unwrap();
        let t = e.apply(f4.t());
        assert_eq!(f16.add(f16.add(f16.mul(t, t), t), Fe::ONE), Fe::ZERO);
        assert!(matches!(Embedding::new(&f4, &f(2, 3)), Err(Error::IncompatibleFields)));
        assert!(matches!(Embedding::new(&f4, &f(3, 2)), Err(Error::IncompatibleFields)));
        // Composition through an intermediate field agrees on the generator
        // up to the choice of root.
        let f256 = f(2, 8);
        let direct = Embedding::new(&f4, &f256).unwrap().apply(f4.t());
        let via = Embedding::new(&f16, &f256).unwrap().apply(t);
        let roots = [direct, f256.add(direct, Fe::ONE)];
        assert!(roots.contains(&via));
    }

    fn field_strategy() -> impl Strategy<Value = (u32, usize)> {
        prop_oneof![Just((2, 1)), Just((7, 1)), Just((2, 4)), Just((3, 3)), Just((5, 2)), Just((19, 6)), Just((17, 4))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn field_axioms((p, n) in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let k = f(p, n);
            let q = k.order();
            let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
            prop_assert_eq!(k.add(a, b), k.add(b, a));
            prop_assert_eq!(k.mul(a, b), k.mul(b, a));
            prop_assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
            prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.add(a, k.neg(a)), Fe::ZERO);
            prop_assert_eq!(k.sub(a, b), k.add(a, k.neg(b)));
            if !a.is_zero() {
                prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), Fe::ONE);
                prop_assert_eq!(k.pow(a, q as u64 - 1), Fe::ONE);
            }
            prop_assert_eq!(k.frobenius(k.mul(a, b)), k.mul(k.frobenius(a), k.frobenius(b)));
            prop_assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
        }

        #[test]
        fn embedding_is_ring_morphism(a in any::<u32>(), b in any::<u32>()) {
            let src = f(3, 2);
            let dst = f(3, 6);
            let e = Embedding::new(&src, &dst).unwrap();
            let (a, b) = (Fe(a % 9), Fe(b % 9));
            prop_assert_eq!(e.apply(src.add(a, b)), dst.add(e.apply(a), e.apply(b)));
            prop_assert_eq!(e.apply(src.mul(a, b)), dst.mul(e.apply(a), e.apply(b)));
            prop_assert_eq!(e.apply(Fe::ONE), Fe::ONE);
        }
    }
}
