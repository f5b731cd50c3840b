//! Reduced rational fractions `N/D` over a finite field, the numerator
//! transform `T_S`, and the conjugation action of `PGL_2(F_q)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::poly::Poly;

/// A fraction `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFrac {
    num: Poly,
    den: Poly,
}

impl PartialOrd for RatFrac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFrac {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.den, &self.num).cmp(&(&other.den, &other.num))
    }
}

impl fmt::Debug for RatFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFrac[{:?}]({})", self.field(), self)
    }
}

impl fmt::Display for RatFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = alloc::format!("{}", self.num);
        if num.contains('+') {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        if self.den.hamming_weight() > 1 {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl RatFrac {
    /// Divides out the gcd and scales the denominator monic.
    pub fn new(num: Poly, den: Poly) -> Result<RatFrac> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let k = den.field().inv_nonzero(den.leading_coeff());
        Ok(RatFrac { num: num.scale(k), den: den.scale(k) })
    }

    pub fn from_poly(p: Poly) -> RatFrac {
        let den = Poly::one(p.field());
        RatFrac { num: p, den }
    }

    /// The identity map `x`.
    pub fn identity(field: &Field) -> RatFrac {
        RatFrac::from_poly(Poly::x(field))
    }

    pub fn constant(field: &Field, c: Fe) -> RatFrac {
        RatFrac::from_poly(Poly::constant(field, c))
    }

    pub fn parse(field: &Field, text: &str) -> Result<RatFrac> {
        Parser::new(field, text).parse_all()
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// `max(deg num, deg den)`, the degree of the map on the projective line.
    pub fn map_degree(&self) -> usize {
        let dn = self.num.degree().unwrap_or(0);
        dn.max(self.den.deg())
    }

    pub fn hamming_weight(&self) -> usize {
        self.num.hamming_weight() + self.den.hamming_weight()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: Fe) -> Option<Fe> {
        let k = self.field();
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(k.mul(self.num.eval(x), k.inv_nonzero(d)))
    }

    pub fn add(&self, other: &RatFrac) -> RatFrac {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFrac::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RatFrac) -> RatFrac {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFrac {
        RatFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFrac) -> RatFrac {
        RatFrac::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<RatFrac> {
        RatFrac::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFrac) -> Result<RatFrac> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFrac {
        RatFrac { num: self.num.pow(e as u64), den: self.den.pow(e as u64) }
    }

    /// Numerator and denominator of `self` homogenized to degree `n` and
    /// evaluated at `(u, v)`: returns `(N_h(u, v), D_h(u, v))`.
    fn homogeneous(&self, u: &Poly, v: &Poly, n: usize) -> (Poly, Poly) {
        let k = self.field();
        let mut upow = Vec::with_capacity(n + 1);
        let mut vpow = Vec::with_capacity(n + 1);
        upow.push(Poly::one(k));
        vpow.push(Poly::one(k));
        for i in 1..=n {
            upow.push(upow[i - 1].mul(u));
            vpow.push(vpow[i - 1].mul(v));
        }
        let form = |p: &Poly| {
            let mut acc = Poly::zero(k);
            for (i, &c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&upow[i].mul(&vpow[n - i]).scale(c));
                }
            }
            acc
        };
        (form(&self.num), form(&self.den))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &RatFrac) -> RatFrac {
        let n = self.map_degree();
        let (a, b) = self.homogeneous(&inner.num, &inner.den, n);
        RatFrac::new(a, b).expect("composition of reduced fractions has nonzero denominator")
    }

    /// `T_S(f) = den^n * f(num/den)` for `deg f = n`, made monic.
    pub fn ts_transform(&self, f: &Poly) -> Result<Poly> {
        let n = match f.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        let k = self.field();
        let c = f.coeffs();
        let mut acc = Poly::constant(k, c[n]);
        let mut dpow = Poly::one(k);
        for i in (0..n).rev() {
            dpow = dpow.mul(&self.den);
            acc = acc.mul(&self.num);
            if !c[i].is_zero() {
                acc = acc.add(&dpow.scale(c[i]));
            }
        }
        Ok(acc.monic())
    }

    /// `T_S^k(f)`.
    pub fn ts_iterate(&self, f: &Poly, k: usize) -> Result<Poly> {
        let mut g = f.clone();
        for _ in 0..k {
            g = self.ts_transform(&g)?;
        }
        Ok(g)
    }

    /// The conjugate `M_{m^-1} o S o M_m`. This is a right action:
    /// `conjugate(S, a*b) = conjugate(conjugate(S, a), b)`.
    pub fn conjugate(&self, m: &Mobius) -> RatFrac {
        let k = self.field();
        let n = self.map_degree();
        let u = Poly::new(k, vec![m.b, m.a]);
        let v = Poly::new(k, vec![m.d, m.c]);
        let (a, b) = self.homogeneous(&u, &v, n);
        // M_{m^-1}(y) = (d y - b) / (-c y + a) applied to y = a/b.
        let num = a.scale(m.d).sub(&b.scale(m.b));
        let den = b.scale(m.a).sub(&a.scale(m.c));
        RatFrac::new(num, den).expect("conjugation keeps a nonzero denominator")
    }

    /// Sort key of the orbit representative: Hamming weight, numerator
    /// degree, then denominator and numerator coefficients.
    pub fn canonical_key(&self) -> (usize, usize, &[Fe], &[Fe]) {
        (self.hamming_weight(), self.num.deg(), self.den.coeffs(), self.num.coeffs())
    }

    /// The full `PGL_2(F_q)` conjugation orbit, sorted and deduplicated.
    pub fn orbit(&self, cap: u64) -> Result<Orbit> {
        let mats = Mobius::all(self.field(), cap)?;
        let mut members: Vec<RatFrac> = mats.iter().map(|m| self.conjugate(m)).collect();
        members.sort();
        members.dedup();
        let canonical = members
            .iter()
            .min_by(|a, b| a.canonical_key().cmp(&b.canonical_key()))
            .cloned()
            .expect("orbit contains the fraction itself");
        Ok(Orbit { members, canonical })
    }

    /// Whether `other = A o self o B` for Möbius maps `A`, `B`. This is
    /// coarser than conjugacy and does not preserve the families `T_S`
    /// generates; it is exposed for comparing representatives chosen under
    /// that looser equivalence. `A o T` ranges over the fractions whose
    /// numerator and denominator span the same pencil as those of `T`.
    pub fn two_sided_equivalent(&self, other: &RatFrac, cap: u64) -> Result<bool> {
        let k = self.field();
        if self.map_degree() != other.map_degree() {
            return Ok(false);
        }
        for m in Mobius::all(k, cap)? {
            let t = self.compose(&m.as_fraction(k));
            let rows = [t.num.coeffs(), t.den.coeffs(), other.num.coeffs(), other.den.coeffs()];
            if rank(k, &rows) == 2 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Orbit representative without materializing the orbit.
    pub fn canonical(&self, cap: u64) -> Result<RatFrac> {
        Ok(self.orbit(cap)?.canonical)
    }
}

fn rank(k: &Field, rows: &[&[Fe]]) -> usize {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut m: Vec<Vec<Fe>> = rows
        .iter()
        .map(|r| {
            let mut v = r.to_vec();
            v.resize(cols, Fe::ZERO);
            v
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = k.inv_nonzero(m[rank][c]);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = k.mul(row[c], inv);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = k.sub(*x, k.mul(f, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A conjugation orbit and its chosen representative.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub members: Vec<RatFrac>,
    pub canonical: RatFrac,
}

impl Orbit {
    pub fn contains(&self, s: &RatFrac) -> bool {
        self.members.binary_search(s).is_ok()
    }
}

/// Projectively normalized invertible matrix `(a b; c d)` acting as
/// `x -> (a x + b)/(c x + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mobius {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl Mobius {
    pub fn new(field: &Field, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<Mobius> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = [a, b, c, d].into_iter().find(|e| !e.is_zero()).expect("nonzero determinant");
        let s = field.inv_nonzero(lead);
        Ok(Mobius { a: field.mul(a, s), b: field.mul(b, s), c: field.mul(c, s), d: field.mul(d, s) })
    }

    pub fn identity() -> Mobius {
        Mobius { a: Fe::ONE, b: Fe::ZERO, c: Fe::ZERO, d: Fe::ONE }
    }

    /// Matrix product `self * other`, i.e. the map `self o other`.
    pub fn mul(&self, field: &Field, other: &Mobius) -> Mobius {
        let k = field;
        let e = |x: Fe, y: Fe, z: Fe, w: Fe| k.add(k.mul(x, y), k.mul(z, w));
        Mobius::new(
            k,
            e(self.a, other.a, self.b, other.c),
            e(self.a, other.b, self.b, other.d),
            e(self.c, other.a, self.d, other.c),
            e(self.c, other.b, self.d, other.d),
        )
        .expect("product of invertible matrices")
    }

    pub fn inverse(&self, field: &Field) -> Mobius {
        Mobius::new(field, self.d, field.neg(self.b), field.neg(self.c), self.a).expect("invertible")
    }

    pub fn as_fraction(&self, field: &Field) -> RatFrac {
        RatFrac::new(Poly::new(field, vec![self.b, self.a]), Poly::new(field, vec![self.d, self.c]))
            .expect("invertible matrix has nonzero denominator")
    }

    /// All `q^3 - q` elements of `PGL_2(F_q)`.
    pub fn all(field: &Field, cap: u64) -> Result<Vec<Mobius>> {
        let q = field.order() as u64;
        let count = q * q * q - q;
        if count > cap {
            return Err(Error::BudgetExceeded { what: "PGL2 enumeration", needed: count, cap });
        }
        let mut out = Vec::with_capacity(count as usize);
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    if d != field.mul(b, c) {
                        out.push(Mobius { a: Fe::ONE, b, c, d });
                    }
                }
            }
        }
        for c in field.elements().filter(|c| !c.is_zero()) {
            for d in field.elements() {
                out.push(Mobius { a: Fe::ZERO, b: Fe::ONE, c, d });
            }
        }
        Ok(out)
    }
}

/// Parses a polynomial in `x`; a nontrivial denominator is an error.
pub(crate) fn parse_poly(field: &Field, text: &str) -> Result<Poly> {
    let r = Parser::new(field, text).parse_all()?;
    if !r.den().is_one() {
        return Err(Error::parse(0, "expected a polynomial, found a fraction"));
    }
    Ok(r.num)
}

/// Recursive-descent parser over `+ - * / ^`, parentheses, integers and the
/// symbols `x` (the variable) and `t` (the field generator). Juxtaposition
/// multiplies, so `*` may be omitted.
struct Parser<'a> {
    field: &'a Field,
    src: Vec<(usize, u8)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Field, text: &str) -> Self {
        let src = text.bytes().enumerate().filter(|(_, b)| !b.is_ascii_whitespace()).collect();
        Parser { field, src, pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).map(|&(_, b)| b)
    }

    fn here(&self) -> usize {
        self.src.get(self.pos).map(|&(i, _)| i).unwrap_or_else(|| self.src.last().map_or(0, |&(i, _)| i + 1))
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::parse(self.here(), msg))
    }

    fn parse_all(mut self) -> Result<RatFrac> {
        if self.src.is_empty() {
            return self.err("empty input");
        }
        let r = self.sum()?;
        if self.peek().is_some() {
            return self.err("unexpected character");
        }
        Ok(r)
    }

    fn sum(&mut self) -> Result<RatFrac> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.product()?.neg()
        } else {
            self.product()?
        };
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<RatFrac> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.power()?;
                    acc = acc.div(&d).map_err(|_| Error::parse(at, "zero denominator"))?;
                }
                Some(b) if b.is_ascii_digit() || b == b'x' || b == b't' || b == b'(' => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RatFrac> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            v = v.checked_mul(10).and_then(|v| v.checked_add((b - b'0') as u64)).ok_or(Error::parse(self.here(), "integer too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<RatFrac> {
        let k = self.field;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFrac::identity(k))
            }
            Some(b't') => {
                if k.is_prime_field() {
                    return self.err("generator t used over a prime field");
                }
                self.pos += 1;
                Ok(RatFrac::constant(k, k.t()))
            }
            Some(b'(') => {
                self.pos += 1;
                let r = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(r)
            }
            Some(b) if b.is_ascii_digit() => {
                let v = self.integer()? % k.characteristic() as u64;
                Ok(RatFrac::constant(k, k.from_int(v as i64)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Formats a fraction in the grammar accepted by [`RatFrac::parse`].
pub fn format(s: &RatFrac) -> String {
    alloc::format!("{s}")
}
