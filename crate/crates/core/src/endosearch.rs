//! Searches for candidate fractions: Verschiebung x-maps, prime-degree
//! endomorphisms and composite endomorphisms along isogeny cycles, each
//! reported once per conjugation orbit.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ec::Curve;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::poly::Poly;
use crate::ratfrac::RatFrac;

/// One step of an isogeny cycle: the domain's j-invariant and the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub j: Fe,
    pub l: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Verschiebung,
    PrimeEndo { l: u32 },
    Cycle { path: Vec<Step> },
}

impl Source {
    pub fn describe(&self, field: &Field) -> String {
        match self {
            Source::Verschiebung => "verschiebung".into(),
            Source::PrimeEndo { l } => alloc::format!("prime_endo({l})"),
            Source::Cycle { path } => {
                let mut s = String::from("cycle(");
                for (i, st) in path.iter().enumerate() {
                    if i > 0 {
                        s.push_str(" -> ");
                    }
                    s.push_str(&alloc::format!("j={}:{}", field.format_element(st.j), st.l));
                }
                s.push(')');
                s
            }
        }
    }
}

/// A fraction found by a search, stored as its orbit representative.
#[derive(Clone, Debug)]
pub struct CandidateFraction {
    pub fraction: RatFrac,
    pub orbit_size: usize,
    pub degree: usize,
    pub source: Source,
    /// Whether the square of the endomorphism still has cyclic kernel.
    pub cyclic_square: bool,
    pub odd_degree: bool,
    /// A curve on which a member of the orbit is an x-map.
    pub curve: Curve,
}

/// Deduplicates fractions up to conjugation, remembering every orbit member
/// seen so far.
struct OrbitSet {
    cap: u64,
    seen: BTreeSet<RatFrac>,
    out: Vec<CandidateFraction>,
}

impl OrbitSet {
    fn new(cap: u64) -> Self {
        OrbitSet { cap, seen: BTreeSet::new(), out: Vec::new() }
    }

    fn insert(&mut self, s: &RatFrac, source: Source, cyclic_square: bool, curve: &Curve) -> Result<()> {
        if self.seen.contains(s) {
            return Ok(());
        }
        let orbit = s.orbit(self.cap)?;
        let degree = s.map_degree();
        self.out.push(CandidateFraction {
            fraction: orbit.canonical,
            orbit_size: orbit.members.len(),
            degree,
            source,
            cyclic_square,
            odd_degree: degree % 2 == 1,
            curve: curve.clone(),
        });
        self.seen.extend(orbit.members);
        Ok(())
    }

    fn finish(mut self) -> (usize, Vec<CandidateFraction>) {
        self.out.sort_by(|a, b| (a.degree, a.fraction.canonical_key()).cmp(&(b.degree, b.fraction.canonical_key())));
        (self.seen.len(), self.out)
    }
}

/// The fraction `S_v` with `S_v(x^q) = X_q`, the x-map of the Verschiebung
/// of an ordinary curve.
pub fn verschiebung_xmap(e: &Curve) -> Result<RatFrac> {
    if !e.is_ordinary() {
        return Err(Error::SupersingularCurve);
    }
    let q = e.field().order() as usize;
    let xq = e.mult_xmap(q);
    let unpack = |p: &Poly| -> Result<Poly> {
        let c = p.coeffs();
        if c.iter().enumerate().any(|(i, v)| i % q != 0 && !v.is_zero()) {
            return Err(Error::Internal("multiplication-by-q map is not a function of x^q"));
        }
        Ok(Poly::new(p.field(), c.iter().step_by(q).copied().collect()))
    };
    RatFrac::new(unpack(xq.num())?, unpack(xq.den())?)
}

/// Which curves a search runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveClass {
    Ordinary,
    /// Ordinary and supersingular curves.
    All,
}

/// Nonsingular curves in a normal form that meets every isomorphism class:
/// `y^2 = x^3 + ax + b` for `p >= 5`, `y^2 = x^3 + a2 x^2 + a4 x + a6` for
/// `p = 3`, and for `p = 2` both `y^2 + xy = x^3 + a2 x^2 + a6` and
/// `y^2 + a3 y = x^3 + a4 x + a6`.
pub fn normal_form_curves(field: &Field, class: CurveClass) -> Vec<Curve> {
    let els: Vec<Fe> = field.elements().collect();
    let z = Fe::ZERO;
    let mut out = Vec::new();
    let mut push = |a: [Fe; 5]| {
        if let Ok(e) = Curve::new(field, a) {
            if class == CurveClass::All || e.is_ordinary() {
                out.push(e);
            }
        }
    };
    match field.characteristic() {
        2 => {
            for &a2 in &els {
                for &a6 in &els {
                    push([Fe::ONE, a2, z, z, a6]);
                }
            }
            if class == CurveClass::All {
                for &a3 in els.iter().filter(|a| !a.is_zero()) {
                    for &a4 in &els {
                        for &a6 in &els {
                            push([z, z, a3, a4, a6]);
                        }
                    }
                }
            }
        }
        3 => {
            for &a2 in &els {
                for &a4 in &els {
                    for &a6 in &els {
                        push([z, a2, z, a4, a6]);
                    }
                }
            }
        }
        _ => {
            for &a in &els {
                for &b in &els {
                    push([z, z, z, a, b]);
                }
            }
        }
    }
    out
}

pub fn ordinary_curves(field: &Field) -> Vec<Curve> {
    normal_form_curves(field, CurveClass::Ordinary)
}

/// One representative per `F_q`-isomorphism class.
pub fn isomorphism_classes(curves: &[Curve]) -> Vec<Curve> {
    let mut reps: Vec<Curve> = Vec::new();
    for e in curves {
        let j = e.j_invariant();
        if !reps.iter().any(|r| r.j_invariant() == j && r.is_isomorphic(e)) {
            reps.push(e.clone());
        }
    }
    reps
}

/// Result of the Verschiebung census.
#[derive(Clone, Debug)]
pub struct Census {
    /// Size of the union of all conjugation orbits.
    pub n: usize,
    pub candidates: Vec<CandidateFraction>,
}

/// Union of the conjugation orbits of `S_v` over all ordinary curves.
pub fn verschiebung_census(field: &Field, cap: u64) -> Result<Census> {
    let q = field.order() as u64;
    if q * q * q > cap {
        return Err(Error::BudgetExceeded { what: "verschiebung census", needed: q * q * q, cap });
    }
    let mut set = OrbitSet::new(cap);
    for e in ordinary_curves(field) {
        let sv = verschiebung_xmap(&e)?;
        if set.seen.contains(&sv) {
            continue;
        }
        let cyc = e.is_cyclic_kernel_xmap(&sv.compose(&sv));
        set.insert(&sv, Source::Verschiebung, cyc, &e)?;
    }
    let (n, candidates) = set.finish();
    Ok(Census { n, candidates })
}

/// x-maps of endomorphisms of `e` that factor as a degree-`l` isogeny
/// followed by an isomorphism back to `e`.
pub fn prime_endomorphisms(e: &Curve, l: u32) -> Result<Vec<RatFrac>> {
    let mut out = Vec::new();
    for h in e.kernel_candidates(l)? {
        let phi = e.velu(&h, l)?;
        for iso in phi.codomain.find_x_isomorphisms(e) {
            out.push(iso.compose(&phi.xmap));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Prime-degree endomorphisms over all classes of curves in `class` whose
/// square keeps a cyclic kernel.
pub fn endo_prime_search(field: &Field, l: u32, class: CurveClass, cap: u64) -> Result<Vec<CandidateFraction>> {
    if l == field.characteristic() {
        return Err(Error::InvalidKernel);
    }
    let mut set = OrbitSet::new(cap);
    for e in isomorphism_classes(&normal_form_curves(field, class)) {
        for s in prime_endomorphisms(&e, l)? {
            if e.is_cyclic_kernel_xmap(&s.compose(&s)) {
                set.insert(&s, Source::PrimeEndo { l }, true, &e)?;
            }
        }
    }
    Ok(set.finish().1)
}

#[derive(Clone, Debug)]
pub struct CycleSearch {
    pub candidates: Vec<CandidateFraction>,
    /// The path budget ran out before the search completed.
    pub truncated: bool,
}

/// Endomorphisms built from paths of isogenies of degrees in `primes` whose
/// composite degree is at most `max_degree` and which return to a curve
/// isomorphic to the start. Composites with non-cyclic kernel and the
/// multiplication maps are dropped; a non-cyclic prefix is never extended.
pub fn endo_cycle_search(field: &Field, max_degree: usize, primes: &[u32], path_cap: u64, cap: u64) -> Result<CycleSearch> {
    let mut set = OrbitSet::new(cap);
    let mut budget = path_cap;
    let mut truncated = false;
    let primes: Vec<u32> = primes.iter().copied().filter(|&l| l != field.characteristic()).collect();
    for e0 in isomorphism_classes(&ordinary_curves(field)) {
        let mut stack = vec![(e0.clone(), RatFrac::identity(field), 1usize, Vec::<Step>::new())];
        while let Some((cur, comp, deg, path)) = stack.pop() {
            for &l in &primes {
                let nd = deg * l as usize;
                if nd > max_degree {
                    continue;
                }
                for h in cur.kernel_candidates(l)? {
                    if budget == 0 {
                        truncated = true;
                        break;
                    }
                    budget -= 1;
                    let phi = cur.velu(&h, l)?;
                    let next = phi.xmap.compose(&comp);
                    if !e0.is_cyclic_kernel_xmap(&next) {
                        continue;
                    }
                    let mut npath = path.clone();
                    npath.push(Step { j: cur.j_invariant(), l });
                    let mult = e0.mult_xmap_if_square(nd);
                    for iso in phi.codomain.find_x_isomorphisms(&e0) {
                        let endo = iso.compose(&next);
                        if mult.as_ref() == Some(&endo) {
                            continue;
                        }
                        let cyc = e0.is_cyclic_kernel_xmap(&endo.compose(&endo));
                        set.insert(&endo, Source::Cycle { path: npath.clone() }, cyc, &e0)?;
                    }
                    stack.push((phi.codomain, next, nd, npath));
                }
            }
        }
    }
    Ok(CycleSearch { candidates: set.finish().1, truncated })
}

impl Curve {
    /// `[n]` as an x-map when `n` is a perfect square `m^2`, the only case
    /// where a degree-`n` endomorphism can equal a multiplication map.
    fn mult_xmap_if_square(&self, n: usize) -> Option<RatFrac> {
        let m = (1..=n).find(|m| m * m >= n)?;
        (m * m == n).then(|| self.mult_xmap(m))
    }
}
