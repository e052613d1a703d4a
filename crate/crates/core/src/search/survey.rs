//! Family-by-group tables comparing the constructions with exhaustive
//! search.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{search, SearchConfig, SearchStatus};
use crate::abelian::{abelian_groups_of_order, GroupSpec};
use crate::construct::{find_witness, label_with_witness, predictions, Prediction};
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilyParams};

#[derive(Debug, Clone, Copy)]
pub struct SurveyConfig {
    pub search: SearchConfig,
    /// Cells with larger groups record `skipped` instead of searching.
    pub search_order_cap: u64,
    /// Parameter sets with larger edge counts are left out.
    pub group_order_cap: u64,
    pub cyclic_only: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            search: SearchConfig::default(),
            search_order_cap: 16,
            group_order_cap: 300,
            cyclic_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub family: String,
    pub params: String,
    #[serde(rename = "group-canonical")]
    pub group_canonical: String,
    #[serde(rename = "theorem-applied")]
    pub theorem_applied: String,
    #[serde(rename = "corollary-predicted")]
    pub corollary_predicted: String,
    #[serde(rename = "search-status")]
    pub search_status: String,
    pub agreement: String,
}

fn params_text(p: &FamilyParams) -> String {
    [("k", p.k), ("m", p.m), ("n", p.n)]
        .iter()
        .filter_map(|(name, v)| v.map(|v| format!("{name}={v}")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn group_text(g: &GroupSpec) -> String {
    g.canonical()
        .iter()
        .map(|p| format!("Z{p}"))
        .collect::<Vec<_>>()
        .join("+")
}

/// One row per (parameter set, isomorphism class of groups of the right order).
pub fn survey(
    family: Family,
    params: &[FamilyParams],
    cfg: &SurveyConfig,
) -> Result<Vec<SurveyRow>> {
    let mut cells = Vec::new();
    for p in params {
        let graph = families::gen(family, p)?;
        let order = graph.edge_count() as u64;
        if order > cfg.group_order_cap {
            continue;
        }
        for g in abelian_groups_of_order(order) {
            if !cfg.cyclic_only || g.is_cyclic() {
                cells.push((*p, g));
            }
        }
    }
    let run = |(p, g): &(FamilyParams, GroupSpec)| cell(family, p, g, cfg);
    if cfg.search.deterministic {
        cells.iter().map(run).collect()
    } else {
        cells.par_iter().map(run).collect()
    }
}

fn cell(family: Family, p: &FamilyParams, g: &GroupSpec, cfg: &SurveyConfig) -> Result<SurveyRow> {
    let predicted = predictions(family, p, g);
    let even_windmill = family == Family::Windmill && p.m.is_some_and(|m| m % 2 == 0);
    let witness = if even_windmill {
        Err(Error::Unsupported("even-blade windmill".into()))
    } else {
        find_witness(family, p, g)
    };
    let (constructed, theorem_applied) = match witness {
        Ok(Some(w)) => {
            label_with_witness(family, p, g, &w)?;
            (Some(true), w.hypothesis.to_string())
        }
        Ok(None) => (Some(false), "none".to_string()),
        Err(Error::Unsupported(_)) => (None, "unsupported".to_string()),
        Err(Error::BudgetExhausted { .. }) => (None, "budget_exhausted".to_string()),
        Err(e) => return Err(e),
    };
    let status = if g.order() <= cfg.search_order_cap {
        Some(search(&families::gen(family, p)?, g, &cfg.search)?.status)
    } else {
        None
    };

    let agreement = if !predicted.is_empty() && constructed == Some(false) {
        "no"
    } else {
        match (constructed, status) {
            (_, None | Some(SearchStatus::BudgetExhausted)) => "unknown",
            (Some(true), Some(SearchStatus::Found)) => "yes",
            (Some(true), Some(SearchStatus::ExhaustedNone)) => "no",
            // for cycles the construction is exact, elsewhere only sufficient
            (_, Some(SearchStatus::Found)) if family == Family::Cycle => "no",
            (_, Some(SearchStatus::Found)) => "open",
            (_, Some(SearchStatus::ExhaustedNone)) => "yes",
        }
    };
    Ok(SurveyRow {
        family: family.to_string(),
        params: params_text(p),
        group_canonical: group_text(g),
        theorem_applied,
        corollary_predicted: if predicted.is_empty() {
            "none".into()
        } else {
            predicted
                .iter()
                .map(Prediction::to_string)
                .collect::<Vec<_>>()
                .join(";")
        },
        search_status: status
            .map(|s| s.to_string())
            .unwrap_or_else(|| "skipped".into()),
        agreement: agreement.into(),
    })
}

pub fn write_csv<W: Write>(rows: &[SurveyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
