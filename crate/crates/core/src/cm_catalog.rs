//! Endomorphisms of small degree on CM curves over the rationals, kept as
//! exact data and reduced to fractions over finite fields on demand.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::ec::Curve;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::poly::Poly;
use crate::ratfrac::RatFrac;

/// `a + b sqrt(d)` with exact rational parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadExpr {
    pub a: Rational64,
    pub b: Rational64,
    pub d: i64,
}

impl QuadExpr {
    pub fn rational(d: i64, a: Rational64) -> Self {
        QuadExpr { a, b: Rational64::zero(), d }
    }

    pub fn int(d: i64, a: i64) -> Self {
        Self::rational(d, Rational64::from_integer(a))
    }

    pub fn new(d: i64, a: (i64, i64), b: (i64, i64)) -> Self {
        QuadExpr { a: Rational64::new(a.0, a.1), b: Rational64::new(b.0, b.1), d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(self, o: Self) -> Self {
        QuadExpr { a: self.a + o.a, b: self.b + o.b, d: self.d }
    }

    pub fn sub(self, o: Self) -> Self {
        QuadExpr { a: self.a - o.a, b: self.b - o.b, d: self.d }
    }

    pub fn neg(self) -> Self {
        QuadExpr { a: -self.a, b: -self.b, d: self.d }
    }

    pub fn mul(self, o: Self) -> Self {
        let d = Rational64::from_integer(self.d);
        QuadExpr { a: self.a * o.a + self.b * o.b * d, b: self.a * o.b + self.b * o.a, d: self.d }
    }

    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Self::int(self.d, 1), |acc, _| acc.mul(self))
    }

    /// Panics on zero, which never occurs for the catalog's fixed data.
    pub fn inv(self) -> Self {
        let norm = self.a * self.a - self.b * self.b * Rational64::from_integer(self.d);
        assert!(!norm.is_zero(), "inverse of zero");
        QuadExpr { a: self.a / norm, b: -self.b / norm, d: self.d }
    }

    /// Image under `sqrt(d) -> s`.
    pub fn reduce(&self, field: &Field, s: Fe) -> Result<Fe> {
        let a = reduce_rational(field, self.a)?;
        if self.b.is_zero() {
            return Ok(a);
        }
        let b = reduce_rational(field, self.b)?;
        Ok(field.add(a, field.mul(b, s)))
    }
}

impl fmt::Display for QuadExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt({})", self.b, self.d),
            (false, false) => write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d),
        }
    }
}

/// Reduces a rational number into the prime field of `field`.
pub fn reduce_rational(field: &Field, r: Rational64) -> Result<Fe> {
    let den = field.from_int(*r.denom());
    if den.is_zero() {
        return Err(Error::BadReduction(format!("characteristic {} divides {}", field.characteristic(), r.denom())));
    }
    field.div(field.from_int(*r.numer()), den)
}

#[derive(Clone, Debug)]
pub struct CmEndo {
    pub name: &'static str,
    pub d: i64,
    /// Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
    pub curve: [i64; 5],
    pub j: i64,
    /// x-map coefficients, lowest degree first.
    pub num: Vec<QuadExpr>,
    pub den: Vec<QuadExpr>,
    pub degree: usize,
}

impl CmEndo {
    /// Whether the x-map needs a square root of `d`.
    pub fn needs_sqrt(&self) -> bool {
        self.num.iter().chain(&self.den).any(|c| !c.is_rational())
    }

    pub fn reduce_curve(&self, field: &Field) -> Result<Curve> {
        match Curve::from_ints(field, self.curve) {
            Err(Error::SingularCurve) => Err(Error::BadReduction(format!("curve {} is singular mod {}", self.name, field.characteristic()))),
            r => r,
        }
    }

    /// The distinct reductions of the x-map, one per square root of `d`.
    pub fn reduce_mod_q(&self, field: &Field) -> Result<Vec<RatFrac>> {
        self.reduce_curve(field)?;
        let roots: Vec<Fe> = if self.needs_sqrt() {
            let s = field.sqrt(field.from_int(self.d)).ok_or_else(|| {
                Error::NotRational(format!("{} is not a square in F_{}", self.d, field.order()))
            })?;
            vec![s, field.neg(s)]
        } else {
            vec![Fe::ZERO]
        };
        let mut out = Vec::new();
        for s in roots {
            let red = |cs: &[QuadExpr]| -> Result<Poly> {
                Ok(Poly::new(field, cs.iter().map(|c| c.reduce(field, s)).collect::<Result<Vec<_>>>()?))
            };
            let frac = RatFrac::new(red(&self.num)?, red(&self.den)?)?;
            if frac.map_degree() != self.degree {
                return Err(Error::BadReduction(format!("x-map of {} degenerates mod {}", self.name, field.characteristic())));
            }
            if !out.contains(&frac) {
                out.push(frac);
            }
        }
        Ok(out)
    }
}

fn scaled(c: QuadExpr, cs: &[QuadExpr]) -> Vec<QuadExpr> {
    cs.iter().map(|&t| c.mul(t)).collect()
}

pub fn catalog() -> Vec<CmEndo> {
    let mut out = Vec::new();

    // y^2 = x^3 + x, alpha = 1 + i: alpha^-2 (x + 1/x).
    let d = -1;
    let alpha = QuadExpr::new(d, (1, 1), (1, 1));
    let c = alpha.pow(2).inv();
    let (num, den) = (scaled(c, &[QuadExpr::int(d, 1), QuadExpr::int(d, 0), QuadExpr::int(d, 1)]), [QuadExpr::int(d, 0), QuadExpr::int(d, 1)].to_vec());
    out.push(CmEndo { name: "i", d, curve: [0, 0, 0, 1, 0], j: 1728, num, den, degree: 2 });

    // y^2 = x^3 + 4x^2 + 2x, alpha = sqrt(-2): alpha^-2 (x + 4 + 2/x).
    let d = -2;
    let alpha = QuadExpr::new(d, (0, 1), (1, 1));
    let c = alpha.pow(2).inv();
    let (num, den) = (scaled(c, &[QuadExpr::int(d, 2), QuadExpr::int(d, 4), QuadExpr::int(d, 1)]), [QuadExpr::int(d, 0), QuadExpr::int(d, 1)].to_vec());
    out.push(CmEndo { name: "ii", d, curve: [0, 4, 0, 2, 0], j: 8000, num, den, degree: 2 });

    // y^2 = x^3 - 35x + 98, alpha = (1 + sqrt(-7))/2:
    // alpha^-2 (x - 7(1 - alpha)^4 / (x + alpha^2 - 2)).
    let d = -7;
    let alpha = QuadExpr::new(d, (1, 2), (1, 2));
    let c = alpha.pow(2).inv();
    let g = alpha.pow(2).sub(QuadExpr::int(d, 2));
    let k = QuadExpr::int(d, 7).mul(QuadExpr::int(d, 1).sub(alpha).pow(4));
    let (num, den) = (scaled(c, &[k.neg(), g, QuadExpr::int(d, 1)]), [g, QuadExpr::int(d, 1)].to_vec());
    out.push(CmEndo { name: "iii", d, curve: [0, 0, 0, -35, 98], j: -3375, num, den, degree: 2 });

    // y^2 + 6xy + 4y = x^3: -(x^3 + 12x^2 + 24x + 16) / (3x^2).
    let d = -3;
    let r = |n: i64, m: i64| QuadExpr::rational(d, Rational64::new(n, m));
    let num = vec![r(-16, 3), r(-8, 1), r(-4, 1), r(-1, 3)];
    let den = vec![r(0, 1), r(0, 1), r(1, 1)];
    out.push(CmEndo { name: "deg3", d, curve: [6, 0, 4, 0, 0], j: 54000, num, den, degree: 3 });

    out
}

/// Looks up an entry by name, with or without the `cm:` prefix.
pub fn lookup(name: &str) -> Option<CmEndo> {
    let key = name.strip_prefix("cm:").unwrap_or(name);
    catalog().into_iter().find(|e| e.name == key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endosearch::prime_endomorphisms;
    use crate::families::density;
    use crate::families::Mode;
    use num_rational::Ratio;

    fn fld(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn odd_prime_powers() -> impl Iterator<Item = u64> {
        [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53].into_iter()
    }

    #[test]
    fn entries() {
        let cat = catalog();
        assert_eq!(cat.iter().map(|e| e.name).collect::<Vec<_>>(), ["i", "ii", "iii", "deg3"]);
        assert_eq!(cat[0].degree, 2);
        assert!(!cat[3].needs_sqrt());
        assert!(!cat[1].needs_sqrt());
        assert!(cat[2].needs_sqrt());
        assert_eq!(lookup("cm:iii").unwrap().curve, [0, 0, 0, -35, 98]);
        assert!(lookup("iv").is_none());
        // alpha^-2 for alpha = (1 + sqrt(-7))/2.
        let a = QuadExpr::new(-7, (1, 2), (1, 2));
        assert_eq!(a.pow(2).inv(), QuadExpr::new(-7, (-3, 8), (-1, 8)));
        assert_eq!(a.pow(2).sub(QuadExpr::int(-7, 2)), QuadExpr::new(-7, (-7, 2), (1, 2)));
    }

    #[test]
    fn reduction_examples() {
        let k = fld(11);
        let ii = lookup("ii").unwrap();
        assert_eq!(ii.reduce_mod_q(&k).unwrap(), vec![RatFrac::parse(&k, "(5*x^2+9*x+10)/x").unwrap()]);
        let i = lookup("i").unwrap();
        assert!(matches!(i.reduce_mod_q(&fld(7)), Err(Error::NotRational(_))));
        assert!(matches!(lookup("deg3").unwrap().reduce_mod_q(&fld(3)), Err(Error::BadReduction(_))));
        // 7 divides the discriminant of y^2 = x^3 - 35x + 98.
        assert!(matches!(lookup("iii").unwrap().reduce_mod_q(&fld(7)), Err(Error::BadReduction(_))));
        assert_eq!(lookup("iii").unwrap().reduce_mod_q(&k).unwrap().len(), 2);
    }

    #[test]
    fn deg3_regenerates_from_components() {
        // x + 24/x + 16/x^2 followed by x -> -x/3 - 4, over Q.
        let inner_num = [16i64, 24, 0, 1];
        let inner_den = [0i64, 0, 1];
        let third = Ratio::new(1, 3);
        let composed: Vec<Rational64> = (0..4)
            .map(|i| -third * Ratio::from_integer(inner_num[i]) - Ratio::from_integer(4) * Ratio::from_integer(*inner_den.get(i).unwrap_or(&0)))
            .collect();
        let e = lookup("deg3").unwrap();
        assert_eq!(composed, e.num.iter().map(|c| c.a).collect::<Vec<_>>());
        assert!(e.den.iter().map(|c| c.a).eq(inner_den.iter().map(|&v| Ratio::from_integer(v))));
        // Same check over finite fields through fraction composition.
        for q in [5u64, 7, 11, 13] {
            let k = fld(q);
            let phi = RatFrac::parse(&k, "x+24/x+16/x^2").unwrap();
            let outer = RatFrac::parse(&k, "-x/3-4").unwrap();
            assert_eq!(e.reduce_mod_q(&k).unwrap(), vec![outer.compose(&phi)]);
        }
    }

    #[test]
    fn reduced_curves_and_maps() {
        for e in catalog() {
            for q in odd_prime_powers() {
                let k = fld(q);
                let Ok(curve) = e.reduce_curve(&k) else { continue };
                assert_eq!(curve.j_invariant(), k.from_int(e.j), "{} q={q}", e.name);
                let Ok(branches) = e.reduce_mod_q(&k) else { continue };
                let endos = prime_endomorphisms(&curve, e.degree as u32).unwrap();
                for s in &branches {
                    assert!(endos.contains(s), "{} q={q}: {s}", e.name);
                }
            }
        }
    }

    #[test]
    fn cyclic_squares() {
        for q in odd_prime_powers() {
            let k = fld(q);
            for e in catalog() {
                let (Ok(curve), Ok(branches)) = (e.reduce_curve(&k), e.reduce_mod_q(&k)) else { continue };
                for s in branches {
                    let cyc = curve.is_cyclic_kernel_xmap(&s.compose(&s));
                    // The squares of (i), (ii) and deg3 are [2], [2] and [3]
                    // up to automorphisms.
                    assert_eq!(cyc, e.name == "iii", "{} q={q}", e.name);
                }
            }
        }
    }

    #[test]
    fn iii_density_at_11() {
        let k = fld(11);
        for s in lookup("iii").unwrap().reduce_mod_q(&k).unwrap() {
            let rep = density(&s, 2, 6, Mode::Exhaustive, 1_000_000).unwrap();
            assert_eq!(rep.density(), Ratio::new(16, 55), "{s}");
        }
    }
}
