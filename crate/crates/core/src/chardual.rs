//! The finite abelian group 𝕎_h^{(1)}(F_{q^n}) ≅ T(F_q), its characters, the norm maps
//! to subfields and the Howe invariants (m_t, h_t) of a character.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dlgroup::GroupParams;
use crate::error::{param, Error, Result};
use crate::gfq::{divisors, Embedding, Fe};
use crate::witt::{WittRing, WittVec};

pub const DEFAULT_GROUP_BUDGET: u128 = 1 << 20;

/// A character, given by exponents on the cyclic factors: χ(y) = Σ a_j y_j (e/d_j) mod e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub exponents: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HoweData {
    pub m_seq: Vec<usize>,
    pub h_seq: Vec<usize>,
}

impl HoweData {
    pub fn trivial(n: usize, h: usize) -> HoweData {
        HoweData { m_seq: vec![1, n], h_seq: vec![h, 1] }
    }

    /// r in the notation m_0 ≤ m_1 < ⋯ < m_r ≤ m_{r+1}.
    pub fn r(&self) -> usize {
        self.m_seq.len() - 2
    }

    pub fn validate(&self, n: usize, h: usize) -> Result<()> {
        let (m, hs) = (&self.m_seq, &self.h_seq);
        let bad = |msg: &str| Err(Error::Domain(format!("malformed Howe data {m:?} {hs:?}: {msg}")));
        if m.len() < 2 || m.len() != hs.len() {
            return bad("length");
        }
        let last = m.len() - 1;
        if m[0] != 1 || m[last] != n || hs[0] != h || hs[last] != 1 {
            return bad("endpoints");
        }
        for t in 0..last {
            if m[t + 1] % m[t] != 0 || m[t] > m[t + 1] || hs[t] < hs[t + 1] {
                return bad("monotonicity or divisibility");
            }
            let inner = t >= 1 && t + 1 < last;
            if inner && (m[t] == m[t + 1] || hs[t] == hs[t + 1]) {
                return bad("strictness");
            }
        }
        Ok(())
    }
}

/// Polycyclic presentation of U^1 = 𝕎_h^{(1)}(F_{q^n}) and its Smith normal form.
#[derive(Debug, Clone)]
pub struct AbelianStructure {
    pub params: GroupParams,
    ring: WittRing,
    /// Generators [1, 0, …, β_b at position l, …] for an F_p-basis β_b.
    gens: Vec<WittVec>,
    gen_level: Vec<usize>,
    /// Column transform V of the Smith form and its inverse.
    v: Vec<Vec<i128>>,
    /// Cyclic factor orders d_j (including ones for trivial factors, dropped in `invariants`).
    diag: Vec<u64>,
    active: Vec<usize>,
    cyclic_gens: Vec<WittVec>,
    pub exponent: u64,
    /// kernel_gens[l-1][i]: generators (as coordinates) of ker(Nm to F_{q^{m_i}}) ∩ U^l.
    kernel_gens: Vec<Vec<Vec<Vec<u64>>>>,
    subfield_degrees: Vec<usize>,
    /// frob_gen_coords[j][i]: coordinates of φ^j(gens[i]) for 0 ≤ j ≤ n.
    frob_gen_coords: Vec<Vec<Vec<u64>>>,
}

fn smith_normal_form(mut a: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = a.len();
    let id = |n: usize| (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>();
    let (mut v, mut vinv) = (id(n), id(n));
    // Column ops act on A and V from the right and on V^{-1} from the left.
    let col_add = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vinv: &mut Vec<Vec<i128>>, src: usize, dst: usize, c: i128| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row[dst] += c * row[src];
        }
        let s = vinv[dst].clone();
        for (x, y) in vinv[src].iter_mut().zip(&s) {
            *x -= c * y;
        }
    };
    let col_swap = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vinv: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    for t in 0..n {
        loop {
            let piv = (t..n).flat_map(|i| (t..n).map(move |j| (i, j))).filter(|&(i, j)| a[i][j] != 0).min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = piv else { return finish(a, v, vinv) };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut vinv, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let c = a[i][t] / p;
                if c != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&rt) {
                        *x -= c * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let c = a[t][j] / p;
                if c != 0 {
                    col_add(&mut a, &mut v, &mut vinv, t, j, -c);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and retry.
            if let Some(i) = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0)) {
                let ri = a[i].clone();
                for (x, y) in a[t].iter_mut().zip(&ri) {
                    *x += y;
                }
                continue;
            }
            break;
        }
    }
    finish(a, v, vinv)
}

fn finish(a: Vec<Vec<i128>>, v: Vec<Vec<i128>>, vinv: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    ((0..a.len()).map(|i| a[i][i].abs()).collect(), v, vinv)
}

impl AbelianStructure {
    pub fn new(params: GroupParams, budget: u128) -> Result<AbelianStructure> {
        params.validate()?;
        let size = (params.q as u128).checked_pow(params.n as u32).unwrap_or(u128::MAX);
        let order = (0..params.h - 1).try_fold(1u128, |acc, _| acc.checked_mul(size)).unwrap_or(u128::MAX);
        if order > budget {
            return Err(Error::Budget { required: order, budget });
        }
        let ring = params.ring(1)?;
        let field = ring.field().clone();
        let p = field.p() as i128;
        let e = field.degree() as usize;
        let mut gens = Vec::new();
        let mut gen_level = Vec::new();
        for l in 1..params.h {
            for b in 0..e {
                let mut c = vec![0u32; e];
                c[b] = 1;
                let mut coords = vec![0; params.h];
                coords[0] = 1;
                coords[l] = field.from_coeffs(&c)?;
                gens.push(WittVec { backend: ring.backend(), coords });
                gen_level.push(l);
            }
        }
        let n_gens = gens.len();
        let mut s = AbelianStructure {
            params,
            ring,
            gens,
            gen_level,
            v: Vec::new(),
            diag: Vec::new(),
            active: Vec::new(),
            cyclic_gens: Vec::new(),
            exponent: 1,
            kernel_gens: Vec::new(),
            frob_gen_coords: Vec::new(),
            subfield_degrees: divisors(params.n as u32).into_iter().map(|d| d as usize).collect(),
        };
        let mut rel = vec![vec![0i128; n_gens]; n_gens];
        for i in 0..n_gens {
            let d = s.digits(&s.ring.pow(&s.gens[i], p as u128))?;
            for j in 0..n_gens {
                rel[i][j] = -(d[j] as i128);
            }
            rel[i][i] += p;
        }
        let (diag, v, vinv) = smith_normal_form(rel);
        if diag.iter().product::<i128>() as u128 != order {
            return Err(Error::Internal("relation lattice has the wrong index".into()));
        }
        s.diag = diag.iter().map(|&d| d as u64).collect();
        s.v = v;
        s.active = (0..n_gens).filter(|&j| s.diag[j] > 1).collect();
        s.exponent = s.active.iter().map(|&j| s.diag[j]).max().unwrap_or(1);
        s.cyclic_gens = s.active.iter().map(|&j| s.from_digits(&vinv[j])).collect();
        s.kernel_gens = s.compute_norm_kernels()?;
        s.frob_gen_coords = (0..=params.n)
            .map(|j| s.gens.iter().map(|g| s.coords(&s.ring.frobenius_pow(g, j as i64))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(s)
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn order(&self) -> u64 {
        self.active.iter().map(|&j| self.diag[j]).product()
    }

    /// Orders of the nontrivial cyclic factors.
    pub fn invariants(&self) -> Vec<u64> {
        self.active.iter().map(|&j| self.diag[j]).collect()
    }

    pub fn cyclic_decomposition(&self) -> Vec<(WittVec, u64)> {
        self.cyclic_gens.iter().cloned().zip(self.invariants()).collect()
    }

    fn from_digits(&self, x: &[i128]) -> WittVec {
        let e = self.exponent.max(self.diag.iter().copied().max().unwrap_or(1)) as i128;
        x.iter().zip(&self.gens).fold(self.ring.one(), |acc, (&c, g)| self.ring.mul(&acc, &self.ring.pow(g, c.rem_euclid(e) as u128)))
    }

    /// Exponents of u in the polycyclic generators, peeled level by level.
    fn digits(&self, u: &WittVec) -> Result<Vec<u64>> {
        let field = self.ring.field();
        let e = field.degree() as usize;
        let mut w = u.clone();
        let mut out = vec![0u64; self.gens.len()];
        for l in 1..self.params.h {
            let c = field.coeffs(w.coords[l]);
            let mut step = self.ring.one();
            for (b, &cb) in c.iter().enumerate() {
                let gi = (l - 1) * e + b;
                out[gi] = cb as u64;
                step = self.ring.mul(&step, &self.ring.pow(&self.gens[gi], cb as u128));
            }
            w = self.ring.mul(&w, &self.ring.unit_inverse(&step)?);
            if w.coords[1..=l].iter().any(|&x| x != 0) {
                return Err(Error::Internal("graded piece is not additive".into()));
            }
        }
        Ok(out)
    }

    pub fn contains(&self, u: &WittVec) -> bool {
        self.ring.check(u).is_ok() && self.ring.in_filtration(u, 1)
    }

    /// Coordinates y_j ∈ Z/d_j on the nontrivial cyclic factors.
    pub fn coords(&self, u: &WittVec) -> Result<Vec<u64>> {
        if !self.contains(u) {
            return Err(Error::InvalidInput("not a principal unit".into()));
        }
        let x = self.digits(u)?;
        Ok(self
            .active
            .iter()
            .map(|&j| {
                let s: i128 = x.iter().enumerate().map(|(i, &xi)| xi as i128 * self.v[i][j]).sum();
                s.rem_euclid(self.diag[j] as i128) as u64
            })
            .collect())
    }

    pub fn element_from_coords(&self, y: &[u64]) -> WittVec {
        y.iter().zip(&self.cyclic_gens).fold(self.ring.one(), |acc, (&c, g)| self.ring.mul(&acc, &self.ring.pow(g, c as u128)))
    }

    /// Element with coordinates 1..h-1 given by the base-Q digits of idx.
    pub fn element_from_index(&self, mut idx: u64) -> WittVec {
        let size = self.ring.field().size() as u64;
        let mut coords = vec![0; self.params.h];
        coords[0] = 1;
        for c in coords.iter_mut().skip(1) {
            *c = (idx % size) as Fe;
            idx /= size;
        }
        WittVec { backend: self.ring.backend(), coords }
    }

    pub fn elements(&self) -> Vec<WittVec> {
        (0..self.order()).map(|i| self.element_from_index(i)).collect()
    }

    /// Elements of U^l = 1 + V^l𝕎.
    fn filtration_elements(&self, l: usize) -> Vec<WittVec> {
        let size = self.ring.field().size() as u64;
        let count = size.pow((self.params.h - l) as u32);
        (0..count).map(|i| self.element_from_index(i * size.pow(l as u32 - 1))).collect()
    }

    /// Nm to F_{q^m}: Π_{i < n/m} φ^{mi}(x), returned inside 𝕎_h(F_{q^n}).
    pub fn norm_w(&self, x: &WittVec, m: usize) -> Result<WittVec> {
        let n = self.params.n;
        if m == 0 || n % m != 0 {
            return param(format!("{m} does not divide {n}"));
        }
        Ok((0..n / m).fold(self.ring.one(), |acc, i| self.ring.mul(&acc, &self.ring.frobenius_pow(x, (m * i) as i64))))
    }

    fn compute_norm_kernels(&self) -> Result<Vec<Vec<Vec<Vec<u64>>>>> {
        (1..self.params.h)
            .map(|l| {
                let elems = self.filtration_elements(l);
                self.subfield_degrees
                    .iter()
                    .map(|&m| {
                        let mut kernel = Vec::new();
                        for u in &elems {
                            if self.ring.is_one(&self.norm_w(u, m)?) {
                                kernel.push(self.coords(u)?);
                            }
                        }
                        Ok(self.greedy_generators(kernel))
                    })
                    .collect()
            })
            .collect()
    }

    fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(self.invariants()).map(|((x, y), d)| (x + y) % d).collect()
    }

    /// A generating set of the subgroup spanned by `elems`, built greedily.
    fn greedy_generators(&self, elems: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
        let zero = vec![0u64; self.active.len()];
        let mut span: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
        let mut gens = Vec::new();
        for k in elems {
            if span.contains(&k) {
                continue;
            }
            let mut shifted = Vec::new();
            let mut c = k.clone();
            while !span.contains(&c) {
                shifted.push(c.clone());
                c = self.add_coords(&c, &k);
            }
            let base: Vec<Vec<u64>> = span.iter().cloned().collect();
            for s in &shifted {
                for b in &base {
                    span.insert(self.add_coords(b, s));
                }
            }
            gens.push(k);
        }
        gens
    }

    pub fn num_characters(&self) -> u64 {
        self.order()
    }

    /// The i-th character in lexicographic order of exponent vectors.
    pub fn character(&self, mut idx: u64) -> Character {
        let inv = self.invariants();
        let mut exponents = vec![0; inv.len()];
        for (slot, d) in exponents.iter_mut().zip(&inv).rev() {
            *slot = idx % d;
            idx /= d;
        }
        Character { exponents }
    }

    pub fn enumerate_characters(&self) -> Vec<Character> {
        (0..self.num_characters()).map(|i| self.character(i)).collect()
    }

    pub fn check_character(&self, chi: &Character) -> Result<()> {
        let inv = self.invariants();
        if chi.exponents.len() != inv.len() || chi.exponents.iter().zip(&inv).any(|(a, d)| a >= d) {
            return Err(Error::InvalidInput(format!("character exponents must lie in {inv:?}")));
        }
        Ok(())
    }

    /// χ(y) as k with χ(y) = ζ_e^k.
    pub fn eval_coords(&self, chi: &Character, y: &[u64]) -> u64 {
        let e = self.exponent;
        chi.exponents.iter().zip(y).zip(self.invariants()).map(|((a, y), d)| a * y % d * (e / d)).sum::<u64>() % e
    }

    pub fn eval(&self, chi: &Character, u: &WittVec) -> Result<u64> {
        Ok(self.eval_coords(chi, &self.coords(u)?))
    }

    fn kills(&self, chi: &Character, gens: &[Vec<u64>]) -> bool {
        gens.iter().all(|y| self.eval_coords(chi, y) == 0)
    }

    /// Smallest ℓ with χ trivial on 1 + V^ℓ𝕎.
    pub fn level(&self, chi: &Character) -> usize {
        let base = &self.frob_gen_coords[0];
        (1..=self.params.h)
            .find(|&lv| base.iter().zip(&self.gen_level).filter(|(_, &l)| l >= lv).all(|(y, _)| self.eval_coords(chi, y) == 0))
            .unwrap_or(self.params.h)
    }

    /// μ(l) for 1 ≤ l < level(χ): the least m | n with χ trivial on ker(Nm_m) ∩ U^l.
    pub fn norm_profile(&self, chi: &Character) -> Vec<usize> {
        let level = self.level(chi);
        (1..level)
            .map(|l| {
                let ks = &self.kernel_gens[l - 1];
                self.subfield_degrees.iter().zip(ks).find(|(_, k)| self.kills(chi, k)).map(|(&m, _)| m).unwrap_or(self.params.n)
            })
            .collect()
    }

    pub fn howe_data(&self, chi: &Character) -> HoweData {
        let (n, h) = (self.params.n, self.params.h);
        let mu = self.norm_profile(chi);
        let mut m_seq = vec![1];
        let mut h_seq = vec![h];
        let mut values: Vec<usize> = mu.clone();
        values.sort_unstable();
        values.dedup();
        for v in values {
            let top = mu.iter().enumerate().filter(|(_, &x)| x == v).map(|(i, _)| i + 1).max().unwrap();
            m_seq.push(v);
            h_seq.push(top + 1);
        }
        m_seq.push(n);
        h_seq.push(1);
        HoweData { m_seq, h_seq }
    }

    /// Conductor of χ on the top graded piece of its level: μ(level − 1), or 1 for trivial χ.
    pub fn top_conductor(&self, chi: &Character) -> usize {
        self.norm_profile(chi).last().copied().unwrap_or(1)
    }

    /// Degree of the fixed field of the Galois stabilizer of χ restricted to U^l:
    /// the least j ≥ 1 with χ ∘ φ^j = χ on U^l.
    pub fn galois_conductor(&self, chi: &Character, l: usize) -> usize {
        let idx: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gen_level[i] >= l).collect();
        let base = &self.frob_gen_coords[0];
        (1..=self.params.n)
            .find(|&j| idx.iter().all(|&i| self.eval_coords(chi, &self.frob_gen_coords[j][i]) == self.eval_coords(chi, &base[i])))
            .unwrap_or(self.params.n)
    }

    pub fn inverse_character(&self, chi: &Character) -> Character {
        Character { exponents: chi.exponents.iter().zip(self.invariants()).map(|(a, d)| (d - a) % d).collect() }
    }
}

/// Checks that every character factors as Π_t ψ_t ∘ Nm_{m_t} with ψ_t primitive of level h_t
/// on 𝕎_h^{(1)}(F_{q^{m_t}}), by exhaustive search. Returns the characters with no factorization.
pub fn reconstruction_failures(params: GroupParams) -> Result<Vec<Character>> {
    let big = AbelianStructure::new(params, DEFAULT_GROUP_BUDGET)?;
    let elems = big.elements();
    let mut subs = Vec::new();
    for m in divisors(params.n as u32) {
        let sp = GroupParams::new(params.q, m as usize, 1, params.h, params.backend)?;
        let small = AbelianStructure::new(sp, DEFAULT_GROUP_BUDGET)?;
        let emb = Embedding::new(small.ring.field().clone(), big.ring.field().clone())?;
        // Coordinates in the small group of Nm(u) for every u of the big group.
        let normed: Vec<Vec<u64>> = elems
            .iter()
            .map(|u| {
                let nm = big.norm_w(u, m as usize)?;
                let coords: Option<Vec<Fe>> = nm.coords.iter().map(|&c| emb.restrict(c)).collect();
                let coords = coords.ok_or_else(|| Error::Internal("norm left the subfield".into()))?;
                small.coords(&WittVec { backend: nm.backend, coords })
            })
            .collect::<Result<_>>()?;
        subs.push((m as usize, small, normed));
    }
    let e = big.exponent;
    let failures: Vec<Character> = big
        .enumerate_characters()
        .into_par_iter()
        .filter(|chi| {
            let hd = big.howe_data(chi);
            let target: Vec<u64> = elems.iter().map(|u| big.eval(chi, u).unwrap()).collect();
            let mut options: Vec<Vec<Vec<u64>>> = Vec::new();
            for t in 1..=hd.r() {
                let (mt, ht) = (hd.m_seq[t], hd.h_seq[t]);
                let (_, small, normed) = subs.iter().find(|(m, _, _)| *m == mt).unwrap();
                let scale = e / small.exponent;
                let cands = small
                    .enumerate_characters()
                    .into_iter()
                    .filter(|psi| small.level(psi) == ht && small.top_conductor(psi) == mt)
                    .map(|psi| normed.iter().map(|y| small.eval_coords(&psi, y) * scale % e).collect())
                    .collect();
                options.push(cands);
            }
            !search_product(&options, vec![0; target.len()], &target, e)
        })
        .collect();
    Ok(failures)
}

fn search_product(options: &[Vec<Vec<u64>>], acc: Vec<u64>, target: &[u64], e: u64) -> bool {
    match options.split_first() {
        None => acc == target,
        Some((first, rest)) => first.iter().any(|vals| {
            let next: Vec<u64> = acc.iter().zip(vals).map(|(a, b)| (a + b) % e).collect();
            search_product(rest, next, target, e)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::Backend;

    fn structure(q: u64, n: usize, h: usize, backend: Backend) -> AbelianStructure {
        AbelianStructure::new(GroupParams::new(q, n, 1, h, backend).unwrap(), DEFAULT_GROUP_BUDGET).unwrap()
    }

    #[test]
    fn group_shapes() {
        let s = structure(2, 2, 2, Backend::EqualChar);
        assert_eq!((s.order(), s.exponent, s.invariants()), (4, 2, vec![2, 2]));
        let s = structure(2, 2, 3, Backend::EqualChar);
        assert_eq!((s.order(), s.exponent), (16, 4));
        let s = structure(2, 2, 3, Backend::PTypical);
        assert_eq!((s.order(), s.exponent), (16, 4));
        let s = structure(3, 2, 1, Backend::EqualChar);
        assert_eq!((s.order(), s.exponent, s.num_characters()), (1, 1, 1));
        assert_eq!(structure(3, 2, 2, Backend::EqualChar).num_characters(), 9);
    }

    #[test]
    fn coordinates_are_a_bijective_homomorphism() {
        for (q, n, h, b) in [(2, 2, 3, Backend::EqualChar), (2, 2, 3, Backend::PTypical), (3, 2, 2, Backend::EqualChar), (2, 3, 2, Backend::PTypical)] {
            let s = structure(q, n, h, b);
            let elems = s.elements();
            let ys: HashSet<Vec<u64>> = elems.iter().map(|u| s.coords(u).unwrap()).collect();
            assert_eq!(ys.len() as u64, s.order());
            for (i, a) in elems.iter().enumerate().step_by(3) {
                for c in elems.iter().skip(i % 5).step_by(4) {
                    let lhs = s.coords(&s.ring.mul(a, c)).unwrap();
                    assert_eq!(lhs, s.add_coords(&s.coords(a).unwrap(), &s.coords(c).unwrap()));
                }
                assert_eq!(s.element_from_coords(&s.coords(a).unwrap()), *a);
            }
        }
    }

    #[test]
    fn norm_is_surjective() {
        let s = structure(2, 2, 3, Backend::EqualChar);
        let sub = structure(2, 1, 3, Backend::EqualChar);
        let emb = Embedding::new(sub.ring.field().clone(), s.ring.field().clone()).unwrap();
        let image: HashSet<Vec<Fe>> = s
            .elements()
            .iter()
            .map(|u| s.norm_w(u, 1).unwrap().coords.iter().map(|&c| emb.restrict(c).unwrap()).collect())
            .collect();
        assert_eq!(image.len() as u64, sub.order());
        let u = s.element_from_index(7);
        assert_eq!(s.norm_w(&u, 2).unwrap(), u);
        assert!(s.norm_w(&u, 3).is_err());
    }

    #[test]
    fn howe_examples() {
        for (q, n, h) in [(2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 4, 2)] {
            let s = structure(q, n, h, Backend::EqualChar);
            let trivial = s.character(0);
            assert_eq!(s.level(&trivial), 1);
            assert_eq!(s.howe_data(&trivial), HoweData::trivial(n, h));
            for chi in s.enumerate_characters() {
                let hd = s.howe_data(&chi);
                hd.validate(n, h).unwrap();
                let mu = s.norm_profile(&chi);
                assert!(mu.windows(2).all(|w| w[0] >= w[1]));
                let lv = s.level(&chi);
                if lv == 2 {
                    let m = s.top_conductor(&chi);
                    assert_eq!(hd, HoweData { m_seq: vec![1, m, n], h_seq: vec![h, 2, 1] });
                }
                if lv >= 2 && mu.iter().all(|&m| m == n) {
                    assert_eq!(hd, HoweData { m_seq: vec![1, n, n], h_seq: vec![h, lv, 1] });
                }
            }
        }
    }

    #[test]
    fn howe_factorizations_exist() {
        for h in [2, 3] {
            let p = GroupParams::new(2, 2, 1, h, Backend::EqualChar).unwrap();
            assert!(reconstruction_failures(p).unwrap().is_empty());
        }
    }
}
