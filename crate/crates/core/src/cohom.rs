//! Closed-form cohomological data: the degrees r_χ and d_χ, the dimension table of H_c^i(X_h),
//! the zeta function, Lefschetz count predictions, θ-traces at very regular elements and
//! the twisted character-sum identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chardual::{AbelianStructure, Character, HoweData, DEFAULT_GROUP_BUDGET};
use crate::cyclotomic::Cyclotomic;
use crate::dlgroup::GroupParams;
use crate::error::{param, Error, Result};
use crate::gfq::{is_prime, Fe};
use crate::witt::WittVec;
use crate::xhvar::{AutomorphismSpec, XhVariety};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeData {
    pub r_chi: usize,
    pub d_chi: usize,
    /// d_t for t = 1..r+1.
    pub d_t: Vec<usize>,
    /// e_t for t = 0..r.
    pub e_t: Vec<usize>,
}

pub fn degree_data(hd: &HoweData, n: usize) -> Result<DegreeData> {
    let h = hd.h_seq[0];
    hd.validate(n, h)?;
    let (m, hs) = (&hd.m_seq, &hd.h_seq);
    let last = m.len() - 1;
    let d_t: Vec<usize> = (1..=last).map(|t| (n / m[t - 1] - n / m[t]) * (hs[t] - 1)).collect();
    let e_t: Vec<usize> = (0..last).map(|t| (n / m[t] - 1) * (hs[t] - hs[t + 1])).collect();
    let d_chi: usize = d_t.iter().sum();
    let r_chi = d_chi + 2 * e_t.iter().sum::<usize>();
    if r_chi > 2 * (n - 1) * (h - 1) || d_chi > (n - 1) * (h - 1) {
        return Err(Error::Internal(format!("degree bounds violated by {hd:?}")));
    }
    Ok(DegreeData { r_chi, d_chi, d_t, e_t })
}

/// q^{n·d/2}, asserting that the exponent is an integer.
fn half_power(q: u64, n: usize, d: usize) -> Result<BigUint> {
    if (n * d) % 2 != 0 {
        return Err(Error::Internal(format!("q^(n·d/2) is not integral for n = {n}, d = {d}")));
    }
    Ok(BigUint::from(q).pow((n * d / 2) as u32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub index: u64,
    pub exponents: Vec<u64>,
    pub level: usize,
    pub m_seq: Vec<usize>,
    pub h_seq: Vec<usize>,
    pub r_chi: usize,
    pub d_chi: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub params: GroupParams,
    pub rows: Vec<CensusRow>,
}

impl Census {
    /// Class sizes keyed by (r_χ, d_χ).
    pub fn classes(&self) -> BTreeMap<(usize, usize), u64> {
        let mut out = BTreeMap::new();
        for row in &self.rows {
            *out.entry((row.r_chi, row.d_chi)).or_insert(0) += 1;
        }
        out
    }
}

pub fn census_with(s: &AbelianStructure) -> Result<Census> {
    let n = s.params.n;
    let rows = (0..s.num_characters())
        .into_par_iter()
        .map(|i| {
            let chi = s.character(i);
            let hd = s.howe_data(&chi);
            let dd = degree_data(&hd, n)?;
            Ok(CensusRow {
                index: i,
                exponents: chi.exponents.clone(),
                level: s.level(&chi),
                m_seq: hd.m_seq,
                h_seq: hd.h_seq,
                r_chi: dd.r_chi,
                d_chi: dd.d_chi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Census { params: s.params, rows })
}

pub fn census(params: GroupParams) -> Result<Census> {
    census_with(&AbelianStructure::new(params, DEFAULT_GROUP_BUDGET)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomTable {
    pub dims: BTreeMap<usize, BigUint>,
}

impl CohomTable {
    pub fn get(&self, i: usize) -> BigUint {
        self.dims.get(&i).cloned().unwrap_or_default()
    }
}

pub fn dims_from_census(c: &Census) -> Result<CohomTable> {
    let (q, n) = (c.params.q, c.params.n);
    let mut dims: BTreeMap<usize, BigUint> = BTreeMap::new();
    for row in &c.rows {
        *dims.entry(row.r_chi).or_default() += half_power(q, n, row.d_chi)?;
    }
    Ok(CohomTable { dims })
}

pub fn dims_table(params: GroupParams) -> Result<CohomTable> {
    dims_from_census(&census(params)?)
}

/// One factor (1 − (−q^{n/2})^i t)^{±dim H_c^i}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaFactor {
    pub degree: usize,
    /// q^{ni/2}.
    pub coefficient: BigUint,
    /// dim H_c^i.
    pub multiplicity: BigUint,
    /// (−1)^{i+1}: +1 for a numerator factor.
    pub sign: i32,
}

impl ZetaFactor {
    fn render(&self) -> String {
        let op = if self.degree % 2 == 1 { '+' } else { '-' };
        let base = format!("(1{op}{}t)", self.coefficient);
        if self.multiplicity.is_one() {
            base
        } else {
            format!("{base}^{}", self.multiplicity)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaFn {
    pub factors: Vec<ZetaFactor>,
}

impl ZetaFn {
    pub fn numerator(&self) -> impl Iterator<Item = &ZetaFactor> {
        self.factors.iter().filter(|f| f.sign > 0)
    }

    pub fn denominator(&self) -> impl Iterator<Item = &ZetaFactor> {
        self.factors.iter().filter(|f| f.sign < 0)
    }
}

impl fmt::Display for ZetaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: String = self.numerator().map(ZetaFactor::render).collect();
        let den: String = self.denominator().map(ZetaFactor::render).collect();
        match (num.is_empty(), den.is_empty()) {
            (_, true) if num.is_empty() => write!(f, "1"),
            (_, true) => write!(f, "{num}"),
            (true, false) => write!(f, "1 / {den}"),
            (false, false) => write!(f, "{num} / {den}"),
        }
    }
}

pub fn zeta_from_dims(table: &CohomTable, q: u64, n: usize) -> Result<ZetaFn> {
    let factors = table
        .dims
        .iter()
        .filter(|(_, d)| !d.is_zero())
        .map(|(&i, d)| {
            Ok(ZetaFactor { degree: i, coefficient: half_power(q, n, i)?, multiplicity: d.clone(), sign: if i % 2 == 1 { 1 } else { -1 } })
        })
        .collect::<Result<_>>()?;
    Ok(ZetaFn { factors })
}

pub fn zeta(params: GroupParams) -> Result<ZetaFn> {
    zeta_from_dims(&dims_table(params)?, params.q, params.n)
}

/// Σ_i (−1)^{i(m+1)} q^{nim/2} dim H_c^i.
pub fn predict_count_from_dims(table: &CohomTable, q: u64, n: usize, m: u32) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (&i, d) in table.dims.iter().filter(|(_, d)| !d.is_zero()) {
        let term = BigInt::from(half_power(q, n, i * m as usize)? * d);
        if (i * (m as usize + 1)) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}

pub fn predict_count(params: GroupParams, m: u32) -> Result<BigInt> {
    predict_count_from_dims(&dims_table(params)?, params.q, params.n, m)
}

/// Σ_χ q^{n(r_χ+d_χ)/2}: the point count over F_{q^n} forced by maximality.
pub fn maximal_count(c: &Census) -> Result<BigUint> {
    c.rows.iter().try_fold(BigUint::zero(), |acc, row| Ok(acc + half_power(c.params.q, c.params.n, row.r_chi + row.d_chi)?))
}

/// A character θ of L^×/U_L^h: θ(π), a character ω of F_{q^n}^× and χ = θ|_{U^1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaData {
    pub h: usize,
    pub chi: Character,
    /// ω(g^k) = ζ_{Q−1}^{omega·k} for the chosen generator g of F_{q^n}^×.
    pub omega: u64,
    /// θ(π) = ζ_{pi_order}^{pi_exponent}.
    pub pi_order: u64,
    pub pi_exponent: u64,
}

pub fn r_theta(theta: &ThetaData, s: &AbelianStructure) -> Result<usize> {
    let p = s.params;
    if theta.h > p.h {
        return param(format!("θ has level {} above h = {}", theta.h, p.h));
    }
    s.check_character(&theta.chi)?;
    let r = degree_data(&s.howe_data(&theta.chi), p.n)?.r_chi;
    Ok(2 * (p.n - 1) * (p.h - 1) - r)
}

pub fn is_very_regular(s: &AbelianStructure, x0: Fe) -> bool {
    let f = s.ring().field();
    let step = s.params.f();
    x0 != 0 && (1..s.params.n as u32).all(|i| f.frob(x0, step * i) != x0)
}

/// (−1)^{r_θ} Σ_{γ ∈ Gal(L/K)} θ^γ(x) for a very regular unit x.
pub fn very_regular_trace(theta: &ThetaData, x: &WittVec, s: &AbelianStructure) -> Result<Cyclotomic> {
    let ring = s.ring();
    ring.check(x)?;
    let x0 = x.coords[0];
    if !is_very_regular(s, x0) {
        return Err(Error::Domain("x is not very regular".into()));
    }
    let f = ring.field();
    let big_q1 = f.size() as u64 - 1;
    let e = s.exponent;
    let order = big_q1.lcm(&e);
    let r = r_theta(theta, s)?;
    let mut out = Cyclotomic::zero(order);
    for i in 0..s.params.n {
        let y = ring.frobenius_pow(x, i as i64);
        let y0 = y.coords[0];
        let u = ring.mul(&ring.unit_inverse(&ring.teichmuller(y0))?, &y);
        let log = f.log(y0).ok_or_else(|| Error::Internal("discrete log failed".into()))? as u64;
        let k = (theta.omega % big_q1) * log % big_q1 * (order / big_q1) + s.eval(&theta.chi, &u)? * (order / e);
        out.add_term(k as i64, 1);
    }
    Ok(if r % 2 == 1 { out.neg() } else { out })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFormulaRow {
    pub character: Vec<u64>,
    pub g_index: u64,
    pub r_chi: usize,
    pub lhs: String,
    pub rhs: String,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFormulaReport {
    pub params: GroupParams,
    pub zeta: Fe,
    pub fixed_point_counts: usize,
    pub rows: Vec<CharacterFormulaRow>,
    pub pass: bool,
}

/// For every χ and g ∈ T(F_q): Σ_t χ(t)^{−1}·#Fix((ζ,t,g)∘Fr_{q^n}) = |T(F_q)|·q^{n r_χ/2}(−1)^{r_χ}χ(g).
pub fn character_formula_check(params: GroupParams, zeta: Fe, budget: u128) -> Result<CharacterFormulaReport> {
    let s = AbelianStructure::new(params, DEFAULT_GROUP_BUDGET)?;
    if !is_very_regular(&s, zeta) {
        return Err(Error::Domain("ζ must be very regular".into()));
    }
    let elems = s.elements();
    let pairs: Vec<(usize, usize)> = (0..elems.len()).flat_map(|t| (0..elems.len()).map(move |g| (t, g))).collect();
    let counts: HashMap<(usize, usize), u64> = pairs
        .par_iter()
        .map(|&(t, g)| {
            let spec = AutomorphismSpec { zeta, t: elems[t].clone(), g: elems[g].clone(), m: 1 };
            Ok(((t, g), XhVariety::count_twisted_fixed_points(params, &spec, budget)?))
        })
        .collect::<Result<_>>()?;
    let coords: Vec<Vec<u64>> = elems.iter().map(|u| s.coords(u)).collect::<Result<_>>()?;
    let e = s.exponent;
    let order_t = s.order();
    let mut rows = Vec::new();
    for chi in s.enumerate_characters() {
        let r = degree_data(&s.howe_data(&chi), params.n)?.r_chi;
        let scale: BigInt = BigInt::from(half_power(params.q, params.n, r)? * order_t) * BigInt::from(if r % 2 == 1 { -1 } else { 1 });
        for g in 0..elems.len() {
            let mut lhs = Cyclotomic::zero(e);
            for t in 0..elems.len() {
                let k = s.eval_coords(&chi, &coords[t]);
                lhs.add_term(-(k as i64), counts[&(t, g)]);
            }
            let rhs = Cyclotomic::root(e, s.eval_coords(&chi, &coords[g]) as i64).scale(scale.clone());
            let agree = lhs == rhs;
            rows.push(CharacterFormulaRow {
                character: chi.exponents.clone(),
                g_index: g as u64,
                r_chi: r,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                agree,
            });
        }
    }
    let pass = rows.iter().all(|r| r.agree);
    Ok(CharacterFormulaReport { params, zeta, fixed_point_counts: counts.len(), rows, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub r_chi: usize,
    pub d_chi: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDiagnostic {
    pub h_prime: usize,
    pub census_count: u64,
    pub formula_value: String,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaDiagnostic {
    pub q: u64,
    pub computed: String,
    pub printed: String,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub params: GroupParams,
    pub classes: Vec<ClassCount>,
    pub norm_type_count: u64,
    pub norm_type_expected: String,
    pub levels: Vec<LevelDiagnostic>,
    pub zeta_x3: ZetaDiagnostic,
    pub all_agree: bool,
}

/// N_{h′} = (q^{h−1} − q^{h′−1} + 1)(q^{p(h′−1)} − q^{p(h′−2)} − q + 1) for h′ ≥ 2.
pub fn printed_level_count(q: u64, p: u32, h: usize, h_prime: usize) -> BigInt {
    let qb = BigInt::from(q);
    let pw = |e: usize| qb.pow(e as u32);
    (pw(h - 1) - pw(h_prime - 1) + 1) * (pw(p as usize * (h_prime - 1)) - pw(p as usize * (h_prime - 2)) - &qb + 1)
}

/// The printed closed form of Z(X_3, t) for n = 2.
pub fn printed_zeta_x3(q: u64) -> ZetaFn {
    let b = |x: u64| BigUint::from(x);
    let factor = |degree: usize, coefficient: u64, multiplicity: u64| ZetaFactor {
        degree,
        coefficient: b(coefficient),
        multiplicity: b(multiplicity),
        sign: if degree % 2 == 1 { 1 } else { -1 },
    };
    ZetaFn {
        factors: vec![
            factor(3, q.pow(3), (q * q - q + 1) * (q * q - q) * q),
            factor(2, q * q, q * q),
            factor(4, q.pow(4), (q.pow(4) - q * q - q + 1) * q * q),
        ],
    }
}

fn same_zeta(a: &ZetaFn, b: &ZetaFn) -> bool {
    let key = |z: &ZetaFn| {
        let mut v: Vec<(usize, BigUint, BigUint, i32)> =
            z.factors.iter().filter(|f| !f.multiplicity.is_zero()).map(|f| (f.degree, f.coefficient.clone(), f.multiplicity.clone(), f.sign)).collect();
        v.sort();
        v
    };
    key(a) == key(b)
}

/// Compares the brute-force census and Z(X_3, t) with the printed closed forms. Never fails on disagreement.
pub fn diagnostics_census(params: GroupParams) -> Result<DiagnosticsReport> {
    let (q, n, h) = (params.q, params.n, params.h);
    if !is_prime(n as u64) {
        return param(format!("diagnostics need n prime, got {n}"));
    }
    let c = census(params)?;
    let classes: Vec<ClassCount> = c.classes().into_iter().map(|((r, d), count)| ClassCount { r_chi: r, d_chi: d, count }).collect();
    let norm_type_count = c.rows.iter().filter(|row| row.d_chi == 0).count() as u64;
    let norm_type_expected = BigUint::from(q).pow(h as u32 - 1);
    let mut levels = Vec::new();
    for hp in 2..=h {
        let census_count = c.rows.iter().filter(|row| row.d_chi == (n - 1) * (hp - 1)).count() as u64;
        let formula = printed_level_count(q, params.p(), h, hp);
        levels.push(LevelDiagnostic { h_prime: hp, census_count, formula_value: formula.to_string(), agree: formula == BigInt::from(census_count) });
    }
    let x3 = GroupParams::new(q, 2, 1, 3, params.backend)?;
    let computed = zeta(x3)?;
    let printed = printed_zeta_x3(q);
    let zeta_x3 = ZetaDiagnostic { q, computed: computed.to_string(), printed: printed.to_string(), agree: same_zeta(&computed, &printed) };
    let all_agree = levels.iter().all(|l| l.agree) && zeta_x3.agree && BigUint::from(norm_type_count) == norm_type_expected;
    Ok(DiagnosticsReport {
        params,
        classes,
        norm_type_count,
        norm_type_expected: norm_type_expected.to_string(),
        levels,
        zeta_x3,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::Backend;

    fn params(q: u64, n: usize, k: usize, h: usize) -> GroupParams {
        GroupParams::new(q, n, k, h, Backend::EqualChar).unwrap()
    }

    fn dims(p: GroupParams) -> Vec<(usize, u64)> {
        dims_table(p).unwrap().dims.into_iter().map(|(i, d)| (i, u64::try_from(d).unwrap())).collect()
    }

    #[test]
    fn degree_examples() {
        let n = 4;
        let triv = degree_data(&HoweData::trivial(n, 3), n).unwrap();
        assert_eq!((triv.r_chi, triv.d_chi), (12, 0));
        for m in [1, 2, 4] {
            let hd = HoweData { m_seq: vec![1, m, n], h_seq: vec![2, 2, 1] };
            assert_eq!(degree_data(&hd, n).unwrap().r_chi, n + n / m - 2);
        }
        let prim = degree_data(&HoweData { m_seq: vec![1, n, n], h_seq: vec![3, 3, 1] }, n).unwrap();
        assert_eq!((prim.r_chi, prim.d_chi), (6, 6));
        assert!(degree_data(&HoweData { m_seq: vec![1, 3], h_seq: vec![3, 1] }, n).is_err());
    }

    #[test]
    fn dims_examples() {
        assert_eq!(dims(params(2, 2, 1, 2)), vec![(1, 4), (2, 2)]);
        assert_eq!(dims(params(2, 2, 1, 3)), vec![(2, 32), (3, 8), (4, 4)]);
        assert_eq!(dims(params(2, 3, 1, 2)), vec![(2, 48), (4, 2)]);
    }

    #[test]
    fn zeta_and_predictions() {
        let p = params(2, 2, 1, 2);
        assert_eq!(zeta(p).unwrap().to_string(), "(1+2t)^4 / (1-4t)^2");
        let z = zeta(params(2, 3, 1, 2)).unwrap();
        assert_eq!(z.numerator().count(), 0);
        assert!(z.to_string().starts_with("1 / "));
        for (m, want) in [(1, 16), (2, 16), (3, 160)] {
            assert_eq!(predict_count(p, m).unwrap(), BigInt::from(want));
        }
    }

    #[test]
    fn theta_traces() {
        let p = params(2, 2, 1, 2);
        let s = AbelianStructure::new(p, DEFAULT_GROUP_BUDGET).unwrap();
        let trivial = ThetaData { h: 2, chi: s.character(0), omega: 0, pi_order: 1, pi_exponent: 0 };
        assert_eq!(r_theta(&trivial, &s).unwrap(), 0);
        let g = s.ring().field().generator();
        let x = s.ring().teichmuller(g);
        assert_eq!(very_regular_trace(&trivial, &x, &s).unwrap(), Cyclotomic::from_int(3, 2));
        let omega = ThetaData { omega: 1, ..trivial.clone() };
        // ζ_3 + ζ_3^2 = −1.
        assert_eq!(very_regular_trace(&omega, &x, &s).unwrap(), Cyclotomic::from_int(3, -1));
        assert!(very_regular_trace(&trivial, &s.ring().one(), &s).is_err());
        for chi in s.enumerate_characters() {
            let th = ThetaData { chi: chi.clone(), ..trivial.clone() };
            if s.level(&chi) == 2 && s.top_conductor(&chi) == 2 {
                assert_eq!(r_theta(&th, &s).unwrap(), 1);
            }
        }
    }

    #[test]
    fn printed_forms() {
        assert_eq!(printed_level_count(2, 2, 3, 2), BigInt::from(6));
        assert_eq!(printed_zeta_x3(2).to_string(), "(1+8t)^12 / (1-4t)^4(1-16t)^44");
    }
}
