use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use harmony_core::abelian::{abelian_groups_of_order, Element, GroupSpec, Subgroup};
use harmony_core::construct::{
    find_witness, label_with_subgroup, label_with_witness, predictions, Labeling,
};
use harmony_core::families::{self, Family, FamilyGraph, FamilyParams};
use harmony_core::harmonic::{harmonious_sequence, is_harmonious_group};
use harmony_core::search::{
    search, survey, write_csv, SearchConfig, SearchStatus, SurveyConfig, VertexOrder,
};
use harmony_core::{verify, Error};

use crate::args::{
    parse_range, Cli, Command, ConstructArgs, ExportArgs, GroupSeqArgs, SearchArgs, SurveyArgs,
    VerifyArgs,
};
use crate::{exit, Done};

pub fn run(cli: Cli) -> Result<Done> {
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Search(a) => search_cmd(a),
        Command::Survey(a) => survey_cmd(a),
        Command::Export(a) => export(a),
        Command::GroupSeq(a) => group_seq(a),
    }
}

fn params_json(p: &FamilyParams) -> Value {
    let mut map = BTreeMap::new();
    for (name, v) in [("k", p.k), ("m", p.m), ("n", p.n)] {
        if let Some(v) = v {
            map.insert(name, v);
        }
    }
    json!(map)
}

fn coords(xs: &[Element]) -> Vec<&[u64]> {
    xs.iter().map(Element::coords).collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(Error::Io)
        .with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<String> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path.display().to_string())
}

/// `"1,0;0,2"` → the subgroup generated by `(1,0)` and `(0,2)`.
fn parse_subgroup(g: &GroupSpec, text: &str) -> Result<Subgroup> {
    let gens = text
        .split(';')
        .map(|part| {
            let c = part
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::GroupSyntax(format!("bad subgroup generator `{part}`")))?;
            g.element(&c)
        })
        .collect::<harmony_core::Result<Vec<_>>>()?;
    Ok(Subgroup::generated_by(g, &gens)?)
}

fn construct(a: ConstructArgs) -> Result<Done> {
    let g = GroupSpec::parse(&a.group)?;
    let family = a.family.family;
    let params = FamilyParams {
        n: a.family.n,
        m: a.family.m,
        k: a.family.k,
    };
    let inputs = json!({ "family": family, "params": params_json(&params), "group": g.forms() });
    families::gen(family, &params)?;

    let (labeling, witness) = match &a.subgroup {
        Some(text) => {
            let h = parse_subgroup(&g, text)?;
            (
                label_with_subgroup(family, &params, &g, &h)?,
                json!({ "source": "given" }),
            )
        }
        None => {
            if family == Family::Windmill && params.m.is_some_and(|m| m % 2 == 0) {
                return Err(Error::Unsupported(
                    "windmills with an even number of blades have no coset construction".into(),
                )
                .into());
            }
            match find_witness(family, &params, &g)? {
                Some(w) => {
                    let info = json!({
                        "source": "found",
                        "hypothesis": w.hypothesis,
                        "predicted_by": w.predicted_by.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    });
                    (label_with_witness(family, &params, &g, &w)?, info)
                }
                None => {
                    let predicted: Vec<String> = predictions(family, &params, &g)
                        .iter()
                        .map(ToString::to_string)
                        .collect();
                    return Ok(Done {
                        code: exit::NONE,
                        inputs,
                        outcome: json!({ "status": "no_witness", "predicted_by": predicted }),
                        artifacts: Vec::new(),
                    });
                }
            }
        }
    };

    let mut artifacts = Vec::new();
    let mut outcome =
        json!({ "status": "constructed", "valid": labeling.is_valid(), "witness": witness });
    match &a.out {
        Some(path) => artifacts.push(write(path, &(labeling.to_json_pretty()? + "\n"))?),
        None => outcome["labeling"] = serde_json::to_value(&labeling)?,
    }
    if let Some(path) = &a.dot {
        artifacts.push(write(path, &labeling.to_dot())?);
    }
    Ok(Done {
        code: exit::OK,
        inputs,
        outcome,
        artifacts,
    })
}

fn verify_cmd(a: VerifyArgs) -> Result<Done> {
    let inputs = json!({ "input": a.input.display().to_string() });
    let labeling = Labeling::from_json_str(&read(&a.input)?)?;
    let cert = verify::check(&labeling);
    let code = if cert.valid { exit::OK } else { exit::INVALID };
    let outcome = json!({
        "status": if cert.valid { "valid" } else { "invalid" },
        "group": labeling.group().forms(),
        "certificate": cert,
    });
    Ok(Done {
        code,
        inputs,
        outcome,
        artifacts: Vec::new(),
    })
}

fn search_graph(a: &SearchArgs) -> Result<FamilyGraph> {
    if let Some(path) = &a.edges {
        let text = read(path)?;
        return Ok(serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?);
    }
    let family = a.family.ok_or_else(|| Error::InvalidParameter {
        family: "search".into(),
        reason: "give --family with its parameters, or --edges".into(),
    })?;
    Ok(families::gen(
        family,
        &FamilyParams {
            n: a.n,
            m: a.m,
            k: a.k,
        },
    )?)
}

fn search_cmd(a: SearchArgs) -> Result<Done> {
    let graph = search_graph(&a)?;
    let groups = if a.all_groups {
        abelian_groups_of_order(graph.edge_count() as u64)
    } else {
        vec![GroupSpec::parse(a.group.as_deref().unwrap_or_default())?]
    };
    let inputs = json!({
        "family": graph.family(),
        "params": graph.params(),
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "groups": groups.iter().map(GroupSpec::forms).collect::<Vec<_>>(),
    });
    let cfg = SearchConfig {
        node_budget: a.node_budget,
        time_budget: Duration::from_secs(a.time_budget),
        count_all: a.count,
        symmetry_breaking: !a.no_symmetry,
        deterministic: a.deterministic,
        vertex_order: VertexOrder::MostConstrained,
    };

    let mut results = Vec::new();
    let mut statuses = Vec::new();
    let mut artifacts = Vec::new();
    for g in &groups {
        let out = search(&graph, g, &cfg)?;
        if let (Some(path), Some(l)) = (&a.out, &out.labeling) {
            artifacts.push(write(path, &(l.to_json_pretty()? + "\n"))?);
        }
        statuses.push(out.status);
        results.push(json!({
            "group": g.forms(),
            "status": out.status,
            "nodes_explored": out.nodes_explored,
            "solutions_count": out.solutions_count,
            "labeling": out.labeling,
        }));
    }
    let code = if statuses.contains(&SearchStatus::Found) {
        exit::OK
    } else if statuses.contains(&SearchStatus::BudgetExhausted) {
        exit::BUDGET
    } else {
        exit::NONE
    };
    Ok(Done {
        code,
        inputs,
        outcome: json!({ "results": results }),
        artifacts,
    })
}

fn survey_params(a: &SurveyArgs) -> Result<Vec<FamilyParams>> {
    let need = |name: &str, v: &Option<String>| -> Result<Vec<u64>> {
        let text = v.as_deref().ok_or_else(|| Error::InvalidParameter {
            family: a.family.to_string(),
            reason: format!("missing --{name}"),
        })?;
        Ok(parse_range(text).map_err(|reason| Error::InvalidParameter {
            family: a.family.to_string(),
            reason,
        })?)
    };
    let ns = need("n", &a.n)?;
    let mut out = Vec::new();
    match a.family {
        Family::Cycle | Family::Wheel => out.extend(ns.iter().map(|&n| FamilyParams::n(n))),
        Family::Superwheel => {
            for k in need("k", &a.k)? {
                out.extend(ns.iter().map(|&n| FamilyParams::kn(k, n)));
            }
        }
        Family::Custom => {
            return Err(
                Error::Unsupported("surveys run over generated families only".into()).into(),
            )
        }
        _ => {
            for m in need("m", &a.m)? {
                out.extend(ns.iter().map(|&n| FamilyParams::mn(m, n)));
            }
        }
    }
    Ok(out)
}

fn survey_cmd(a: SurveyArgs) -> Result<Done> {
    let params = survey_params(&a)?;
    let inputs = json!({
        "family": a.family,
        "params": params.iter().map(params_json).collect::<Vec<_>>(),
        "cyclic_only": a.cyclic_only,
        "search_cap": a.search_cap,
        "order_cap": a.order_cap,
    });
    let cfg = SurveyConfig {
        search: SearchConfig {
            node_budget: a.node_budget,
            time_budget: Duration::from_secs(a.time_budget),
            deterministic: a.deterministic,
            ..SearchConfig::default()
        },
        search_order_cap: a.search_cap,
        group_order_cap: a.order_cap,
        cyclic_only: a.cyclic_only,
    };
    let rows = survey(a.family, &params, &cfg)?;
    let file =
        fs::File::create(&a.out).with_context(|| format!("cannot write {}", a.out.display()))?;
    write_csv(&rows, file)?;
    let mut agreement: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &rows {
        *agreement.entry(r.agreement.as_str()).or_default() += 1;
    }
    let outcome = json!({ "status": "done", "rows": rows.len(), "agreement": agreement });
    Ok(Done {
        code: exit::OK,
        inputs,
        outcome,
        artifacts: vec![a.out.display().to_string()],
    })
}

fn export(a: ExportArgs) -> Result<Done> {
    let inputs = json!({ "input": a.dot.display().to_string() });
    let labeling = Labeling::from_json_str(&read(&a.dot)?)?;
    let path = a.out.clone().unwrap_or_else(|| a.dot.with_extension("dot"));
    let artifact = write(&path, &labeling.to_dot())?;
    Ok(Done {
        code: exit::OK,
        inputs,
        outcome: json!({ "status": "exported" }),
        artifacts: vec![artifact],
    })
}

fn group_seq(a: GroupSeqArgs) -> Result<Done> {
    let g = GroupSpec::parse(&a.group)?;
    let inputs = json!({ "group": g.forms() });
    let predicate = is_harmonious_group(&g);
    Ok(match harmonious_sequence(&g)? {
        Some(seq) => Done {
            code: exit::OK,
            inputs,
            outcome: json!({
                "status": "found",
                "predicate": predicate,
                "sequence": coords(seq.elements()),
                "sums": seq.sums().iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(),
            }),
            artifacts: Vec::new(),
        },
        None => Done {
            code: exit::NONE,
            inputs,
            outcome: json!({ "status": "none", "predicate": predicate }),
            artifacts: Vec::new(),
        },
    })
}
