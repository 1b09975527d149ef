//! The GKM criterion for cohomogeneity one diagrams, Euler characteristics,
//! and a direct check of pairwise independence of isotropy weights.

use std::fmt;

use crate::diagram::{lambda_weight, GroupDiagram};
use crate::error::{Error, Result};
use crate::ratlin::{proportional, Covector};
use crate::weyl::{gen_cap, orbit_mod_sign, RootSet, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Homogeneous,
    Case1,
    Case2,
    NotGkm,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Homogeneous => "Homogeneous",
            CaseTag::Case1 => "Case1",
            CaseTag::Case2 => "Case2",
            CaseTag::NotGkm => "NotGkm",
        })
    }
}

impl std::str::FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Homogeneous" => CaseTag::Homogeneous,
            "Case1" => CaseTag::Case1,
            "Case2" => CaseTag::Case2,
            "NotGkm" => CaseTag::NotGkm,
            _ => return Err(Error::Schema { path: "case".into(), msg: format!("unknown case `{s}`") }),
        })
    }
}

/// Outcome of the rank condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCondition {
    pub holds: bool,
    pub kplus_full_rank: bool,
    pub kminus_full_rank: bool,
    pub rank_g: usize,
    pub rank_h: usize,
}

/// Outcome of the root condition: roots of G vanishing on `t ∩ h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCondition {
    pub holds: bool,
    pub offending: Vec<Covector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmVerdict {
    pub rank: RankCondition,
    pub roots: RootCondition,
    pub is_gkm: bool,
    pub case_tag: CaseTag,
    /// True when the input's `K-` is the full-rank side and the labels were exchanged.
    pub swapped: bool,
    pub lambda: Option<Covector>,
    pub euler: Option<usize>,
}

/// Exchanges `K+` and `K-` when only `K-` has full rank.
pub fn normalize(d: &GroupDiagram) -> (GroupDiagram, bool) {
    if !d.kplus.full_rank && d.kminus.full_rank {
        (d.swapped(), true)
    } else {
        (d.clone(), false)
    }
}

/// Some singular isotropy group has full rank and `rank H = rank G - 1`.
pub fn condition_rank(d: &GroupDiagram) -> RankCondition {
    let kplus_full_rank = d.kplus.full_rank;
    let kminus_full_rank = d.kminus.full_rank;
    let rank_h = d.rank_h();
    RankCondition {
        holds: (kplus_full_rank || kminus_full_rank) && rank_h + 1 == d.rank,
        kplus_full_rank,
        kminus_full_rank,
        rank_g: d.rank,
        rank_h,
    }
}

/// No root of G vanishes on `t ∩ h`. When `t ∩ h = 0` every root vanishes.
pub fn condition_roots(d: &GroupDiagram) -> RootCondition {
    let span = d.h_span();
    let offending: Vec<Covector> = d.g.roots.roots().iter().filter(|a| span.annihilated_by(a)).cloned().collect();
    RootCondition { holds: offending.is_empty(), offending }
}

/// The same condition via proportionality to `lambda`; requires `lambda` to exist.
pub fn condition_roots_via_lambda(d: &GroupDiagram) -> Result<RootCondition> {
    let lambda = lambda_weight(d)?;
    let mut offending = Vec::new();
    for a in d.g.roots.roots() {
        if proportional(a, &lambda)? {
            offending.push(a.clone());
        }
    }
    Ok(RootCondition { holds: offending.is_empty(), offending })
}

/// Sum over full-rank sides of `|W(G)| / |W(K)|`.
pub fn euler_characteristic(d: &GroupDiagram) -> Result<usize> {
    if !d.kplus.full_rank && !d.kminus.full_rank {
        return Err(Error::RankMismatch("no singular isotropy group has full rank".into()));
    }
    let cap = gen_cap();
    let wg = WeylGroup::from_roots(&d.g.roots, &d.gram, cap)?;
    let mut chi = 0;
    for k in [&d.kplus, &d.kminus] {
        if k.full_rank {
            let wk = WeylGroup::from_roots(&k.roots, &d.gram, cap)?;
            chi += wg.order() / wk.order();
        }
    }
    Ok(chi)
}

pub fn gkm_verdict(d: &GroupDiagram) -> GkmVerdict {
    let (nd, swapped) = normalize(d);
    let rank = condition_rank(&nd);
    let roots = condition_roots(&nd);
    let is_gkm = rank.holds && roots.holds;
    let case_tag = match (is_gkm, nd.kminus.full_rank) {
        (false, _) => CaseTag::NotGkm,
        (true, true) => CaseTag::Case1,
        (true, false) => CaseTag::Case2,
    };
    let lambda = lambda_weight(&nd).ok();
    let euler = if is_gkm { euler_characteristic(&nd).ok() } else { None };
    GkmVerdict { rank, roots, is_gkm, case_tag, swapped, lambda, euler }
}

/// Weights at the base fixed point of the full-rank side, mod sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseWeights {
    pub tangential: Vec<Covector>,
    pub normal: Vec<Covector>,
}

/// Tangential classes `Δ_G \ Δ_K+` and normal classes `W(K+)·λ`, mod sign.
pub fn base_weights(d: &GroupDiagram) -> Result<BaseWeights> {
    let (nd, _) = normalize(d);
    if !nd.kplus.full_rank {
        return Err(Error::RankMismatch("no singular isotropy group has full rank".into()));
    }
    let lambda = lambda_weight(&nd)?;
    let tangential = nd.g.roots.difference(&nd.kplus.roots).positive_classes();
    let wk = WeylGroup::from_roots(&nd.kplus.roots, &nd.gram, gen_cap())?;
    let normal = orbit_mod_sign(&wk, &lambda).into_iter().collect();
    Ok(BaseWeights { tangential, normal })
}

/// Pairwise independence of the isotropy weights at the base fixed point,
/// computed from the weights themselves rather than the root criterion.
///
/// When dimensions are known, the normal weight classes must also account
/// for the whole slice: each class spans a real 2-plane, so the slice
/// dimension `dim K+ - dim H + 1` must be twice their number.
pub fn direct_weight_check(d: &GroupDiagram) -> Result<bool> {
    let (nd, _) = normalize(d);
    let w = base_weights(&nd)?;
    let all: Vec<&Covector> = w.tangential.iter().chain(&w.normal).collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if proportional(a, b)? {
                return Ok(false);
            }
        }
    }
    if let (Some(dk), Some(dh)) = (nd.kplus.effective_dim(nd.rank), nd.h.dim) {
        if dk + 1 != dh + 2 * w.normal.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|W(G)| / |W(K)|`, the Euler characteristic of `G/K` for equal rank.
pub fn homogeneous_euler(g_roots: &RootSet, k_roots: &RootSet, gram: &crate::weyl::GramForm) -> Result<usize> {
    let cap = gen_cap();
    let wg = WeylGroup::from_roots(g_roots, gram, cap)?;
    let wk = WeylGroup::from_roots(k_roots, gram, cap)?;
    Ok(wg.order() / wk.order())
}
