//! Lifespans and densities of iterated `T_S` families, and the classical
//! seed predicates for the Q- and R-transforms.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::poly::{enumerate_monic_irreducible, random_monic_irreducible, resultant, Poly};
use crate::ratfrac::RatFrac;

/// Default iteration depth.
pub const DEFAULT_DEPTH: usize = 6;
/// Default number of samples in sampled mode.
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// How many transforms a polynomial survived before the first reducible
/// iterate, or `AtLeast(K)` when all `K` iterates were irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Steps {
    Exactly(usize),
    AtLeast(usize),
}

impl Steps {
    /// Histogram bucket: `i` for `Exactly(i)`, `K` for the sentinel.
    pub fn bucket(&self) -> usize {
        match *self {
            Steps::Exactly(i) | Steps::AtLeast(i) => i,
        }
    }

    pub fn survived(&self) -> bool {
        matches!(self, Steps::AtLeast(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LifespanResult {
    pub f: Poly,
    pub steps: Steps,
    /// Degrees of `f, T_S(f), ...` up to the first reducible iterate.
    pub degrees: Vec<usize>,
}

/// Whether `T_S(h)` is irreducible, for `h` monic irreducible.
///
/// For `deg S = 2` and `deg h = m >= 2`, `T_S(h)` is irreducible iff the
/// quadratic `N(x) - b D(x)` is irreducible over `F_q(b)` for a root `b`
/// of `h`. Writing `N - y D = A(y) x^2 + B(y) x + C(y)`, in odd
/// characteristic this is `chi(Res(h, B^2 - 4AC)) = -1`; in characteristic
/// 2 it is `B(b) != 0` and `Tr(A C / B^2)(b) = 1`, the trace taken down
/// to `F_2` through `sum_i G(b_i)` with `G = A C B^-2 mod h`.
pub fn ts_is_irreducible(s: &RatFrac, h: &Poly) -> Result<bool> {
    if s.map_degree() == 2 && h.deg() >= 2 {
        if let Some(v) = quadratic_fibre_test(s, h) {
            return Ok(v);
        }
    }
    s.ts_transform(h)?.is_irreducible()
}

fn quadratic_fibre_test(s: &RatFrac, h: &Poly) -> Option<bool> {
    let k = s.field();
    let (n, d) = (s.num(), s.den());
    // Coefficient of x^i in N - y D as a polynomial in y.
    let coef = |i: usize| Poly::new(k, vec![n.coeff(i), k.neg(d.coeff(i))]);
    let (a, b, c) = (coef(2), coef(1), coef(0));
    let h = h.monic();
    if resultant(&h, &a).is_zero() {
        return None;
    }
    if k.characteristic() != 2 {
        let delta = b.square().sub(&a.mul(&c).scale(k.from_int(4)));
        return Some(k.quadratic_character(resultant(&h, &delta)) == -1);
    }
    if b.is_zero() {
        return Some(false);
    }
    let binv = b.square().inv_mod(&h)?;
    let g = a.mul(&c).mul(&binv).rem(&h);
    let sums = power_sums(&h, h.deg());
    let mut tr = Fe::ZERO;
    for (j, &gj) in g.coeffs().iter().enumerate() {
        tr = k.add(tr, k.mul(gj, sums[j]));
    }
    Some(k.absolute_trace(tr) == 1)
}

/// Power sums `p_0 .. p_{n-1}` of the roots of a monic polynomial, by
/// Newton's identities (no division, valid in every characteristic).
pub(crate) fn power_sums(f: &Poly, n: usize) -> Vec<Fe> {
    let k = f.field();
    let d = f.deg();
    let c = f.coeffs();
    let mut p = vec![k.from_int(d as i64)];
    for m in 1..n {
        let mut acc = Fe::ZERO;
        for i in 1..m.min(d + 1) {
            acc = k.add(acc, k.mul(c[d - i], p[m - i]));
        }
        if m <= d {
            acc = k.add(acc, k.mul(k.from_int(m as i64), c[d - m]));
        }
        p.push(k.neg(acc));
    }
    p.truncate(n);
    p
}

/// Iterates `T_S` on a monic irreducible `f` up to `depth` times.
pub fn lifespan(f: &Poly, s: &RatFrac, depth: usize) -> Result<LifespanResult> {
    if !f.is_irreducible()? {
        return Err(Error::ReduciblePolynomial);
    }
    let mut cur = f.monic();
    let mut degrees = vec![cur.deg()];
    for i in 0..depth {
        if !ts_is_irreducible(s, &cur)? {
            return Ok(LifespanResult { f: f.clone(), steps: Steps::Exactly(i), degrees });
        }
        if i + 1 < depth {
            cur = s.ts_transform(&cur)?;
            degrees.push(cur.deg());
        } else {
            degrees.push(cur.deg() * s.map_degree());
        }
    }
    Ok(LifespanResult { f: f.clone(), steps: Steps::AtLeast(depth), degrees })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { n: u64, seed: u64 },
}

/// Lifespan histogram over monic irreducibles of one degree.
#[derive(Clone, Debug)]
pub struct DensityReport {
    pub q: u32,
    pub d: usize,
    pub s: RatFrac,
    pub depth: usize,
    pub mode: Mode,
    /// Buckets `0, 1, ..., K-1` and the `>= K` bucket last.
    pub histogram: Vec<u64>,
    pub total: u64,
}

impl DensityReport {
    pub fn new(s: &RatFrac, d: usize, depth: usize, mode: Mode) -> DensityReport {
        DensityReport {
            q: s.field().order(),
            d,
            s: s.clone(),
            depth,
            mode,
            histogram: vec![0; depth + 1],
            total: 0,
        }
    }

    pub fn record(&mut self, steps: Steps) {
        self.histogram[steps.bucket()] += 1;
        self.total += 1;
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exhaustive
    }

    /// Fraction of examined polynomials per bucket, reduced.
    pub fn bucket_ratios(&self) -> Vec<Ratio<u64>> {
        self.histogram.iter().map(|&c| Ratio::new(c, self.total.max(1))).collect()
    }

    /// Fraction surviving all `K` transforms.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.histogram[self.depth], self.total.max(1))
    }

    pub fn estimate(&self) -> f64 {
        self.histogram[self.depth] as f64 / self.total.max(1) as f64
    }
}

/// The `i`-th sampled starting polynomial for a seed. Each index gets its
/// own ChaCha stream, so any evaluation order gives the same samples.
pub fn sample_polynomial(field: &Field, d: usize, seed: u64, index: u64) -> Result<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_monic_irreducible(field, d, &mut rng)
}

/// Exhaustive lifespan histogram over all monic irreducibles of degree `d`.
pub fn lifespan_histogram(s: &RatFrac, d: usize, depth: usize, cap: u64) -> Result<DensityReport> {
    let mut rep = DensityReport::new(s, d, depth, Mode::Exhaustive);
    for f in enumerate_monic_irreducible(s.field(), d, cap)? {
        rep.record(lifespan(&f, s, depth)?.steps);
    }
    Ok(rep)
}

/// Density report in the requested mode.
pub fn density(s: &RatFrac, d: usize, depth: usize, mode: Mode, cap: u64) -> Result<DensityReport> {
    match mode {
        Mode::Exhaustive => lifespan_histogram(s, d, depth, cap),
        Mode::Sampled { n, seed } => {
            let mut rep = DensityReport::new(s, d, depth, mode);
            for i in 0..n {
                let f = sample_polynomial(s.field(), d, seed, i)?;
                rep.record(lifespan(&f, s, depth)?.steps);
            }
            Ok(rep)
        }
    }
}

/// Exhaustive when `q^d <= cap`, otherwise sampled.
pub fn auto_mode(field: &Field, d: usize, cap: u64, samples: u64, seed: u64) -> Mode {
    let q = field.order() as u64;
    match q.checked_pow(d as u32) {
        Some(t) if t <= cap => Mode::Exhaustive,
        _ => Mode::Sampled { n: samples, seed },
    }
}

/// Seed condition of the Q-transform over `F_{2^r}`:
/// `tr(a_{n-1}) = tr(a_1/a_0) = 1`.
pub fn q_seed_check(f: &Poly) -> Result<bool> {
    let k = f.field();
    if k.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: "even", p: k.characteristic() });
    }
    let f = f.monic();
    let n = f.degree().ok_or(Error::ConstantPolynomial)?;
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let a0 = f.coeff(0);
    if a0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let t1 = k.absolute_trace(f.coeff(n - 1));
    let t2 = k.absolute_trace(k.div(f.coeff(1), a0)?);
    Ok(t1 == 1 && t2 == 1)
}

/// Seed condition of the R-transform over odd `F_q`: `f(1) f(-1)` is a
/// non-square, and `deg f` is even when `q = 3 mod 4`.
pub fn r_seed_check(f: &Poly) -> Result<bool> {
    let k = f.field();
    if k.characteristic() == 2 {
        return Err(Error::WrongCharacteristic { expected: "odd", p: 2 });
    }
    let n = f.degree().ok_or(Error::ConstantPolynomial)?;
    if k.order() % 4 == 3 && n % 2 == 1 {
        return Ok(false);
    }
    let v = k.mul(f.eval(Fe::ONE), f.eval(k.neg(Fe::ONE)));
    Ok(k.quadratic_character(v) == -1)
}

/// The Q-transform fraction `(x^2+1)/x`.
pub fn q_fraction(field: &Field) -> RatFrac {
    RatFrac::new(Poly::from_ints(field, &[1, 0, 1]), Poly::x(field)).expect("nonzero denominator")
}

/// The R-transform fraction `(x^2+1)/(2x)`; odd characteristic only.
pub fn r_fraction(field: &Field) -> Result<RatFrac> {
    if field.characteristic() == 2 {
        return Err(Error::WrongCharacteristic { expected: "odd", p: 2 });
    }
    RatFrac::new(Poly::from_ints(field, &[1, 0, 1]), Poly::from_ints(field, &[0, 2]))
}
