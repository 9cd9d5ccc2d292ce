//! Normed index sets for the coordinates of the unipotent group, their strata attached to
//! Howe data, the order-reversing injection ℐ → 𝒥 and a checker for which index pairs
//! can share a monomial of the determinant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chardual::HoweData;
use crate::dlgroup::{derive_perms, permutations};
use crate::error::{Error, Result};

/// (i, j, l): the coefficient of π^{l} (or π^{l-1} above the diagonal) in entry (i, j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Index {
    pub i: usize,
    pub j: usize,
    pub l: usize,
}

impl Index {
    pub fn new(i: usize, j: usize, l: usize) -> Index {
        Index { i, j, l }
    }

    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }
}

/// The representative of m modulo n in [1, n].
pub fn bracket(m: i64, n: usize) -> usize {
    let r = m.rem_euclid(n as i64) as usize;
    if r == 0 {
        n
    } else {
        r
    }
}

/// |(i, j, l)| = [j − i] + n(l − 1).
pub fn norm_idx(x: Index, n: usize) -> usize {
    bracket(x.j as i64 - x.i as i64, n) + n * (x.l - 1)
}

pub fn vee(x: Index, h_t: usize) -> Result<Index> {
    let l = if x.is_diagonal() { h_t as i64 - 1 - x.l as i64 } else { h_t as i64 - x.l as i64 };
    if l < 1 || l as usize > h_t.saturating_sub(1) {
        return Err(Error::Domain(format!("dual of {x:?} at level {h_t} is out of range")));
    }
    Ok(Index::new(x.j, x.i, l as usize))
}

/// The sets 𝒜_{s,t}, 𝒜⁻_{s,t}, ℐ_{s,t} and 𝒥_{s,t} for given Howe data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strata {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub h_t: usize,
    pub a: Vec<Index>,
    pub a_minus: Vec<Index>,
    pub i_set: Vec<Index>,
    pub j_set: Vec<Index>,
}

impl Strata {
    pub fn new(hd: &HoweData, n: usize, s: usize, t: usize) -> Result<Strata> {
        let last = hd.m_seq.len() - 1;
        if s >= last || t > last {
            return Err(Error::Domain(format!("stratum ({s}, {t}) outside the Howe data")));
        }
        let (ms, ms1, h_t) = (hd.m_seq[s], hd.m_seq[s + 1], hd.h_seq[t]);
        let a: Vec<Index> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && (j as i64 - i as i64) % ms as i64 == 0 && (j as i64 - i as i64) % ms1 as i64 != 0)
            .flat_map(|(i, j)| (1..h_t).map(move |l| Index::new(i, j, l)))
            .collect();
        let a_minus: Vec<Index> = a.iter().copied().filter(|x| x.i == 1).collect();
        let (i_set, j_set) = a_minus.iter().partition(|x| 2 * norm_idx(**x, n) > n * (h_t - 1));
        Ok(Strata { n, s, t, h_t, a, a_minus, i_set, j_set })
    }
}

/// (1, σ^j(1), l) ↦ (1, σ^{n−j}(1), h_t − l) on ℐ_{s,t}.
pub fn ij_injection(strata: &Strata, sigma: &[usize]) -> Result<Vec<(Index, Index)>> {
    let n = strata.n;
    let orbit: Vec<usize> = (0..n)
        .scan(1usize, |c, _| {
            let v = *c;
            *c = sigma[*c - 1];
            Some(v)
        })
        .collect();
    strata
        .i_set
        .iter()
        .map(|x| {
            let j = orbit.iter().position(|&c| c == x.j).ok_or_else(|| Error::Internal("σ is not an n-cycle".into()))?;
            Ok((*x, Index::new(1, orbit[(n - j) % n], strata.h_t - x.l)))
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionReport {
    pub strata_checked: usize,
    pub injective: bool,
    pub lands_in_j: bool,
    pub order_reversing: bool,
    /// Bijective exactly when #𝒜⁻_{s,t} is even.
    pub parity_criterion: bool,
    /// Strata where the parity of #𝒜_{s,t} (all rows) disagrees with bijectivity.
    pub full_set_parity_mismatches: usize,
    pub counts_match_closed_forms: bool,
}

impl InjectionReport {
    pub fn pass(&self) -> bool {
        self.injective && self.lands_in_j && self.order_reversing && self.parity_criterion && self.counts_match_closed_forms
    }
}

/// d_t = (n/m_{t−1} − n/m_t)(h_t − 1) for t = 1..r+1.
pub fn d_closed_forms(hd: &HoweData, n: usize) -> Vec<usize> {
    (1..hd.m_seq.len()).map(|t| (n / hd.m_seq[t - 1] - n / hd.m_seq[t]) * (hd.h_seq[t] - 1)).collect()
}

/// e_t = (n/m_t − 1)(h_t − h_{t+1}) for t = 0..r.
pub fn e_closed_forms(hd: &HoweData, n: usize) -> Vec<usize> {
    (0..hd.m_seq.len() - 1).map(|t| (n / hd.m_seq[t] - 1) * (hd.h_seq[t] - hd.h_seq[t + 1])).collect()
}

/// Checks the injection and the stratum counts for every (s, t) of the given Howe data.
pub fn check_injections(hd: &HoweData, n: usize, k: usize) -> Result<InjectionReport> {
    let sigma = derive_perms(n, k)?.sigma;
    let last = hd.m_seq.len() - 1;
    let mut rep = InjectionReport {
        injective: true,
        lands_in_j: true,
        order_reversing: true,
        parity_criterion: true,
        counts_match_closed_forms: true,
        ..Default::default()
    };
    for s in 0..last {
        for t in 0..last {
            let st = Strata::new(hd, n, s, t)?;
            let map = ij_injection(&st, &sigma)?;
            let mut images: Vec<Index> = map.iter().map(|(_, y)| *y).collect();
            images.sort();
            images.dedup();
            rep.injective &= images.len() == map.len();
            rep.lands_in_j &= images.iter().all(|y| st.j_set.contains(y));
            let full = n * (st.h_t - 1);
            rep.order_reversing &= map.iter().all(|(x, y)| {
                let (nx, ny) = (norm_idx(*x, n), norm_idx(*y, n));
                nx + ny == full && 2 * ny < full
            });
            rep.order_reversing &= map.iter().all(|(x1, y1)| {
                map.iter().all(|(x2, y2)| norm_idx(*x1, n) >= norm_idx(*x2, n) || norm_idx(*y1, n) > norm_idx(*y2, n))
            });
            let bijective = images.len() == st.j_set.len();
            rep.parity_criterion &= bijective == (st.a_minus.len() % 2 == 0);
            rep.full_set_parity_mismatches += usize::from(bijective != (st.a.len() % 2 == 0));
            rep.strata_checked += 1;
        }
    }
    let d = d_closed_forms(hd, n);
    for t in 1..last {
        rep.counts_match_closed_forms &= Strata::new(hd, n, t - 1, t)?.a_minus.len() == d[t - 1];
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetContributionReport {
    pub n: usize,
    pub h_prime: usize,
    pub monomials_checked: u64,
    pub pass: bool,
    pub counterexample: Option<(Index, Index)>,
    /// Pairs of diagonal variables with norm sum n(h′−1); the dual map is only asserted off the diagonal.
    pub diagonal_equality_pairs: u64,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Exhaustively checks which pairs of variables co-occur in a monomial of det over 𝕎_{h′}
/// in equal characteristic, with variables indexed by 𝒜⁺ for h = h′.
pub fn check_det_contribution(n: usize, h_prime: usize) -> DetContributionReport {
    let full = n * h_prime.saturating_sub(1);
    let comps: Vec<Vec<Vec<usize>>> = (0..h_prime).map(|l| compositions(l, n)).collect();
    let per_perm: Vec<(u64, u64, Option<(Index, Index)>)> = permutations(n)
        .into_par_iter()
        .map(|(gamma, _)| {
            let (mut checked, mut diag_pairs, mut bad) = (0u64, 0u64, None);
            for parts in comps.iter().flatten() {
                let mut vars = Vec::with_capacity(n);
                let mut vanishes = false;
                for (i0, &li) in parts.iter().enumerate() {
                    let (i, j) = (i0 + 1, gamma[i0] + 1);
                    let lstar = if i < j { li + 1 } else { li };
                    if i > j && li == 0 || lstar > h_prime - 1 {
                        vanishes = true;
                        break;
                    }
                    if lstar >= 1 {
                        vars.push(Index::new(i, j, lstar));
                    }
                }
                if vanishes {
                    continue;
                }
                checked += 1;
                for (a, x) in vars.iter().enumerate() {
                    for y in &vars[a + 1..] {
                        let sum = norm_idx(*x, n) + norm_idx(*y, n);
                        let ok = if sum > full {
                            false
                        } else if sum < full {
                            true
                        } else if x.is_diagonal() || y.is_diagonal() {
                            diag_pairs += 1;
                            true
                        } else {
                            vee(*x, h_prime).map(|v| v == *y).unwrap_or(false)
                        };
                        if !ok && bad.is_none() {
                            bad = Some((*x, *y));
                        }
                    }
                }
            }
            (checked, diag_pairs, bad)
        })
        .collect();
    let counterexample = per_perm.iter().find_map(|(_, _, b)| *b);
    DetContributionReport {
        n,
        h_prime,
        monomials_checked: per_perm.iter().map(|p| p.0).sum(),
        pass: counterexample.is_none(),
        counterexample,
        diagonal_equality_pairs: per_perm.iter().map(|p| p.1).sum(),
    }
}
