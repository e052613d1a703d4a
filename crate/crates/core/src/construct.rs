//! Coset constructions of Γ-harmonious labelings, and the witness finder
//! that looks for a subgroup `H` satisfying a construction's hypotheses.
//!
//! Every `label_*` function re-verifies its output; a failure there is an
//! [`Error::Internal`], never a returned labeling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{quotient, subgroups_of_order, Element, GroupSpec, QuotientView, Subgroup};
use crate::error::{Error, Result};
use crate::families::{self, expected_edge_count, Family, FamilyGraph, FamilyParams, VertexId};
use crate::harmonic::{
    harmonious_sequence, is_harmonious_canonical, quotient_sequence, subgroup_sequence,
    SequenceConfig,
};
use crate::verify;

/// The subgroup data recorded alongside a constructed labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub subgroup: Vec<Element>,
    pub beta: Option<Element>,
}

/// A vertex labeling of a family graph, `labels[i]` belonging to
/// `graph.vertices()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    graph: FamilyGraph,
    group: GroupSpec,
    labels: Vec<Element>,
    witness: Option<WitnessRecord>,
}

impl Labeling {
    /// Rejects a wrong number of labels or labels from another group.
    pub fn new(graph: FamilyGraph, group: GroupSpec, labels: Vec<Element>) -> Result<Labeling> {
        if labels.len() != graph.vertex_count() {
            return Err(Error::Malformed(format!(
                "{} labels for {} vertices",
                labels.len(),
                graph.vertex_count()
            )));
        }
        if let Some(x) = labels.iter().find(|x| x.group() != &group) {
            return Err(Error::Malformed(format!(
                "label {x} is not an element of {group}"
            )));
        }
        Ok(Labeling {
            graph,
            group,
            labels,
            witness: None,
        })
    }

    /// Labels given per vertex id; every vertex must be labeled exactly once.
    pub fn from_map(
        graph: FamilyGraph,
        group: GroupSpec,
        map: &HashMap<VertexId, Element>,
    ) -> Result<Labeling> {
        if let Some(v) = map.keys().find(|v| graph.index_of(v).is_none()) {
            return Err(Error::Malformed(format!("label for unknown vertex {v}")));
        }
        let labels = graph
            .vertices()
            .iter()
            .map(|v| {
                map.get(v)
                    .cloned()
                    .ok_or_else(|| Error::Malformed(format!("vertex {v} is unlabeled")))
            })
            .collect::<Result<Vec<_>>>()?;
        Labeling::new(graph, group, labels)
    }

    pub fn with_witness(mut self, witness: Option<WitnessRecord>) -> Labeling {
        self.witness = witness;
        self
    }

    pub fn graph(&self) -> &FamilyGraph {
        &self.graph
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn label(&self, v: &VertexId) -> Option<&Element> {
        self.graph.index_of(v).map(|i| &self.labels[i])
    }

    pub fn witness(&self) -> Option<&WitnessRecord> {
        self.witness.as_ref()
    }

    /// Induced edge labels, in edge order.
    pub fn edge_labels(&self) -> Vec<Element> {
        self.graph
            .edges()
            .iter()
            .map(|&(a, b)| self.labels[a].add(&self.labels[b]).expect("same group"))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        verify::check(self).valid
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses labeling JSON; every failure is reported as malformed input.
    pub fn from_json_str(text: &str) -> Result<Labeling> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    /// Graphviz rendering with vertex labels and induced edge labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (v, x) in self.graph.vertices().iter().zip(&self.labels) {
            out.push_str(&format!("  \"{v}\" [label=\"{x}\"];\n"));
        }
        for ((a, b), w) in self.graph.edge_ids().zip(self.edge_labels()) {
            out.push_str(&format!("  \"{a}\" -- \"{b}\" [label=\"{w}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    #[serde(rename = "H")]
    h: Vec<Vec<u64>>,
    beta: Option<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct LabelingJson {
    group: Vec<u64>,
    graph: FamilyGraph,
    labels: OrderedLabels,
    witness: Option<WitnessJson>,
}

/// Vertex-id keyed map that serializes in vertex order.
struct OrderedLabels(Vec<(String, Vec<u64>)>);

impl Serialize for OrderedLabels {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for OrderedLabels {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, Vec<u64>>::deserialize(d)?;
        Ok(OrderedLabels(map.into_iter().collect()))
    }
}

impl Serialize for Labeling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = |x: &Element| x.coords().to_vec();
        LabelingJson {
            group: self.group.factors().to_vec(),
            graph: self.graph.clone(),
            labels: OrderedLabels(
                self.graph
                    .vertices()
                    .iter()
                    .map(|v| v.to_string())
                    .zip(self.labels.iter().map(coords))
                    .collect(),
            ),
            witness: self.witness.as_ref().map(|w| WitnessJson {
                h: w.subgroup.iter().map(coords).collect(),
                beta: w.beta.as_ref().map(coords),
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Labeling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LabelingJson::deserialize(d)?;
        Labeling::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

impl Labeling {
    fn from_raw(raw: LabelingJson) -> Result<Labeling> {
        let group = crate::abelian::make_group(&raw.group)?;
        let element = |c: &[u64]| {
            group
                .element(c)
                .map_err(|_| Error::Malformed(format!("{c:?} is not an element of {group}")))
        };
        let mut map = HashMap::new();
        for (id, c) in &raw.labels.0 {
            map.insert(id.parse::<VertexId>().expect("infallible"), element(c)?);
        }
        let witness = match raw.witness {
            Some(w) => Some(WitnessRecord {
                subgroup: w.h.iter().map(|c| element(c)).collect::<Result<_>>()?,
                beta: w.beta.as_deref().map(element).transpose()?,
            }),
            None => None,
        };
        Ok(Labeling::from_map(raw.graph, group.clone(), &map)?.with_witness(witness))
    }
}

/// Which construction's hypothesis a witness satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// Γ itself has a harmonious sequence (cycles).
    HarmoniousGroup,
    /// `|H| = n` with a harmonious sequence (superwheels, wheels).
    HarmoniousSubgroup,
    /// `|H| = m` odd and `Γ/H` has a harmonious sequence (windmills).
    HarmoniousQuotient,
    /// `|H| = n` with a harmonious sequence and `Γ/H` cyclic (prisms, webs).
    HarmoniousSubgroupCyclicQuotient,
}

impl Hypothesis {
    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::HarmoniousGroup => "harmonious_group",
            Hypothesis::HarmoniousSubgroup => "harmonious_subgroup",
            Hypothesis::HarmoniousQuotient => "harmonious_quotient",
            Hypothesis::HarmoniousSubgroupCyclicQuotient => "harmonious_subgroup_cyclic_quotient",
        }
    }

    pub fn for_family(family: Family) -> Option<Hypothesis> {
        match family {
            Family::Cycle => Some(Hypothesis::HarmoniousGroup),
            Family::Wheel | Family::Superwheel => Some(Hypothesis::HarmoniousSubgroup),
            Family::Windmill => Some(Hypothesis::HarmoniousQuotient),
            Family::Prism | Family::ClosedWeb | Family::OpenWeb => {
                Some(Hypothesis::HarmoniousSubgroupCyclicQuotient)
            }
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form sufficient conditions on the nested form `Z_{n1} ⊕ … ⊕ Z_{nt}`
/// under which a witness is guaranteed to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    /// `n`, `m` odd: any Γ.
    OddWindmill,
    /// `n` odd and `2m−1 | n1`.
    OddPrism,
    /// `n` even, `t ≥ 2`, `2m−1 | n1`, and `4 | n1, 2 | n2` or `n2 ≥ 4` even.
    EvenPrism,
    /// `n` odd and Γ cyclic.
    CyclicClosedWeb,
    /// `n` odd and `2m | n1`.
    OddClosedWeb,
    /// `n` even; the payload is the first of the four nested-form cases that holds.
    EvenClosedWeb(u8),
    OddOpenWeb,
    EvenOpenWeb,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::OddWindmill => f.write_str("odd_windmill"),
            Prediction::OddPrism => f.write_str("odd_prism"),
            Prediction::EvenPrism => f.write_str("even_prism"),
            Prediction::CyclicClosedWeb => f.write_str("cyclic_closed_web"),
            Prediction::OddClosedWeb => f.write_str("odd_closed_web"),
            Prediction::EvenClosedWeb(case) => write!(f, "even_closed_web_case_{case}"),
            Prediction::OddOpenWeb => f.write_str("odd_open_web"),
            Prediction::EvenOpenWeb => f.write_str("even_open_web"),
        }
    }
}

/// All predictions that fire for this instance.
pub fn predictions(family: Family, params: &FamilyParams, g: &GroupSpec) -> Vec<Prediction> {
    let (Some(n), m) = (params.n, params.m.unwrap_or(0)) else {
        return Vec::new();
    };
    let Ok(edges) = expected_edge_count(family, params) else {
        return Vec::new();
    };
    if edges != g.order() || n < 3 {
        return Vec::new();
    }
    let nested = g.nested();
    let t = nested.len();
    let nth = |i: usize| nested.get(i).copied().unwrap_or(1);
    let (n1, n2, n3) = (nth(0), nth(1), nth(2));
    let even = |x: u64| x % 2 == 0;
    let odd_n = n % 2 == 1;
    let mut out = Vec::new();
    match family {
        Family::Windmill if m >= 2 && odd_n && m % 2 == 1 => out.push(Prediction::OddWindmill),
        Family::Prism | Family::OpenWeb if m >= 2 && n1 % (2 * m - 1) == 0 => {
            let even_case = t >= 2 && ((n1 % 4 == 0 && even(n2)) || (n2 >= 4 && even(n2)));
            let (odd_tag, even_tag) = if family == Family::Prism {
                (Prediction::OddPrism, Prediction::EvenPrism)
            } else {
                (Prediction::OddOpenWeb, Prediction::EvenOpenWeb)
            };
            if odd_n {
                out.push(odd_tag);
            } else if even_case {
                out.push(even_tag);
            }
        }
        Family::ClosedWeb if m >= 2 => {
            if odd_n {
                if t == 1 {
                    out.push(Prediction::CyclicClosedWeb);
                }
                if n1 % (2 * m) == 0 {
                    out.push(Prediction::OddClosedWeb);
                }
            } else if t >= 2 && n1 % (2 * m) == 0 {
                let nt = nested[t - 1];
                let case = if n1 % (8 * m) == 0 && even(n2) {
                    Some(1)
                } else if n1 % (4 * m) == 0 && even(n2) && n2 >= 4 {
                    Some(2)
                } else if n2 % 4 == 0 && t >= 3 && even(n3) {
                    Some(3)
                } else if t >= 3 && even(n3) && nt > 1 && nt % 2 == 1 {
                    Some(4)
                } else {
                    None
                };
                out.extend(case.map(Prediction::EvenClosedWeb));
            }
        }
        _ => {}
    }
    out
}

/// The harmonious ordering a construction is built on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleSequence {
    /// Elements of `H` (or of Γ itself for cycles).
    Subgroup(Vec<Element>),
    /// Cosets of `H` as transversal positions, identity coset first.
    Quotient(Vec<usize>),
}

/// A subgroup satisfying a construction's hypothesis, with everything the
/// construction needs.
#[derive(Debug, Clone)]
pub struct Witness {
    pub hypothesis: Hypothesis,
    pub subgroup: Subgroup,
    pub quotient: QuotientView,
    pub beta: Option<Element>,
    pub cycle_seq: CycleSequence,
    pub predicted_by: Vec<Prediction>,
}

impl Witness {
    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            subgroup: self.subgroup.elements(),
            beta: self.beta.clone(),
        }
    }
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

fn check_order(edges: u64, g: &GroupSpec) -> Result<()> {
    if edges != g.order() {
        return Err(Error::OrderMismatch {
            edges,
            order: g.order(),
        });
    }
    Ok(())
}

fn check_subgroup(g: &GroupSpec, h: &Subgroup, order: u64, name: &str) -> Result<()> {
    if h.parent() != g {
        return Err(Error::GroupMismatch {
            left: g.to_string(),
            right: h.parent().to_string(),
        });
    }
    if h.order() != order {
        return Err(hypothesis(format!(
            "H has order {}, the construction needs |H| = {name} = {order}",
            h.order()
        )));
    }
    Ok(())
}

fn harmonious_in_subgroup(h: &Subgroup) -> Result<Vec<Element>> {
    subgroup_sequence(h, &SequenceConfig::default())?
        .ok_or_else(|| hypothesis("H has no harmonious sequence (it has a nontrivial cyclic Sylow 2-subgroup or is an elementary 2-group)"))
}

fn cyclic_generator(q: &QuotientView) -> Result<Element> {
    q.generator()
        .ok_or_else(|| hypothesis(format!("Γ/H ≅ {:?} is not cyclic", q.nested())))
}

fn finish(
    graph: FamilyGraph,
    g: &GroupSpec,
    labels: Vec<Element>,
    witness: Option<WitnessRecord>,
) -> Result<Labeling> {
    let labeling = Labeling::new(graph, g.clone(), labels)?.with_witness(witness);
    let cert = verify::check(&labeling);
    if !cert.valid {
        return Err(Error::Internal(format!(
            "construction produced an invalid {} labeling over {g}: {} collisions, {} missing edge labels",
            labeling.graph().family(),
            cert.vertex_collisions.len(),
            cert.missing_edge_labels.len()
        )));
    }
    Ok(labeling)
}

/// `C_n` labeled by a harmonious sequence of Γ; `None` when Γ has none.
pub fn label_cycle(n: u64, g: &GroupSpec) -> Result<Option<Labeling>> {
    check_order(n, g)?;
    let graph = families::cycle(n)?;
    match harmonious_sequence(g)? {
        Some(seq) => finish(graph, g, seq.elements().to_vec(), None).map(Some),
        None => Ok(None),
    }
}

/// Hubs get the non-identity coset representatives in transversal order,
/// the rim an `H`-harmonious sequence.
pub fn label_superwheel(k: u64, n: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    check_order((k + 1) * n, g)?;
    let graph = families::superwheel(k, n)?;
    check_subgroup(g, h, n, "n")?;
    let seq = harmonious_in_subgroup(h)?;
    hubbed_labeling(graph, g, h, &seq)
}

/// A wheel is the one-hub superwheel.
pub fn label_wheel(n: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    check_order(2 * n, g)?;
    let graph = families::wheel(n)?;
    check_subgroup(g, h, n, "n")?;
    let seq = harmonious_in_subgroup(h)?;
    hubbed_labeling(graph, g, h, &seq)
}

fn hubbed_labeling(
    graph: FamilyGraph,
    g: &GroupSpec,
    h: &Subgroup,
    seq: &[Element],
) -> Result<Labeling> {
    let q = quotient(g, h)?;
    let labels = q
        .transversal()
        .into_iter()
        .skip(1)
        .chain(seq.iter().cloned())
        .collect();
    finish(
        graph,
        g,
        labels,
        Some(WitnessRecord {
            subgroup: h.elements(),
            beta: None,
        }),
    )
}

/// Needs `m` odd: blade `j` is the quotient cycle lifted by the `j`-th
/// element of `H`, which keeps the labels `γ + 2h_j` apart across blades.
pub fn label_windmill(n: u64, m: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    let graph = families::windmill(n, m)?;
    check_order(n * m, g)?;
    if m % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "windmill with an even number of blades (m = {m}): two blade shifts would double to the same element"
        )));
    }
    check_subgroup(g, h, m, "m")?;
    let q = quotient(g, h)?;
    let seq = quotient_sequence(&q, &SequenceConfig::default())?
        .ok_or_else(|| hypothesis(format!("Γ/H ≅ {:?} has no harmonious sequence", q.nested())))?;
    windmill_labeling(graph, g, h, &q, &seq)
}

fn windmill_labeling(
    graph: FamilyGraph,
    g: &GroupSpec,
    h: &Subgroup,
    q: &QuotientView,
    seq: &[usize],
) -> Result<Labeling> {
    let start = seq
        .iter()
        .position(|&c| c == 0)
        .ok_or_else(|| Error::Internal("identity coset missing".into()))?;
    let gammas: Vec<Element> = seq[start..]
        .iter()
        .chain(&seq[..start])
        .skip(1)
        .map(|&c| q.representative(c))
        .collect();
    let mut labels = vec![g.identity()];
    for hj in h.elements() {
        labels.extend(
            gammas
                .iter()
                .map(|gamma| gamma.add(&hj).expect("same group")),
        );
    }
    finish(
        graph,
        g,
        labels,
        Some(WitnessRecord {
            subgroup: h.elements(),
            beta: None,
        }),
    )
}

/// `x(j,i) ← g(x_{i−j}) + jβ`: layer `j` is the base cycle shifted along the
/// rungs and lifted into coset `jβ + H`.
pub fn label_prism(m: u64, n: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    let graph = families::prism(m, n)?;
    check_order((2 * m - 1) * n, g)?;
    check_subgroup(g, h, n, "n")?;
    let seq = harmonious_in_subgroup(h)?;
    let beta = cyclic_generator(&quotient(g, h)?)?;
    layered_labeling(graph, g, h, &seq, &beta)
}

/// Center `← 0`, `x(j,i) ← g(x_{i−j+1}) + jβ` for `j = 1..m`; needs `Γ/H` cyclic of order `2m`.
pub fn label_closed_web(m: u64, n: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    let graph = families::closed_web(m, n)?;
    check_order(2 * m * n, g)?;
    check_subgroup(g, h, n, "n")?;
    let seq = harmonious_in_subgroup(h)?;
    let beta = cyclic_generator(&quotient(g, h)?)?;
    layered_labeling(graph, g, h, &seq, &beta)
}

/// As the closed web; `Γ/H` cyclic of order `2m−1`.
pub fn label_open_web(m: u64, n: u64, g: &GroupSpec, h: &Subgroup) -> Result<Labeling> {
    let graph = families::open_web(m, n)?;
    check_order((2 * m - 1) * n, g)?;
    check_subgroup(g, h, n, "n")?;
    let seq = harmonious_in_subgroup(h)?;
    let beta = cyclic_generator(&quotient(g, h)?)?;
    layered_labeling(graph, g, h, &seq, &beta)
}

/// Prism layers start at 0 and webs at 1, so `i − layer` realizes both shifts.
fn layered_labeling(
    graph: FamilyGraph,
    g: &GroupSpec,
    h: &Subgroup,
    seq: &[Element],
    beta: &Element,
) -> Result<Labeling> {
    let n = seq.len() as i64;
    let labels = graph
        .vertices()
        .iter()
        .map(|v| match v {
            VertexId::Center => Ok(g.identity()),
            VertexId::Cycle { layer, index } => {
                let pos = (*index as i64 - 1 - *layer as i64).rem_euclid(n) as usize;
                Ok(seq[pos]
                    .add(&beta.scale(*layer as u64))
                    .expect("same group"))
            }
            other => Err(Error::Internal(format!(
                "unexpected vertex {other} in a layered family"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    finish(
        graph,
        g,
        labels,
        Some(WitnessRecord {
            subgroup: h.elements(),
            beta: Some(beta.clone()),
        }),
    )
}

/// Builds the labeling for a witness returned by [`find_witness`].
pub fn label_with_witness(
    family: Family,
    params: &FamilyParams,
    g: &GroupSpec,
    w: &Witness,
) -> Result<Labeling> {
    let graph = families::gen(family, params)?;
    check_order(graph.edge_count() as u64, g)?;
    let record = Some(w.record());
    match (&w.cycle_seq, family) {
        (CycleSequence::Subgroup(seq), Family::Cycle) => finish(graph, g, seq.clone(), None),
        (CycleSequence::Subgroup(seq), Family::Wheel | Family::Superwheel) => {
            hubbed_labeling(graph, g, &w.subgroup, seq)
        }
        (CycleSequence::Quotient(seq), Family::Windmill) => {
            windmill_labeling(graph, g, &w.subgroup, &w.quotient, seq)
        }
        (CycleSequence::Subgroup(seq), Family::Prism | Family::ClosedWeb | Family::OpenWeb) => {
            let beta = w
                .beta
                .as_ref()
                .ok_or_else(|| Error::Internal("layered witness without β".into()))?;
            layered_labeling(graph, g, &w.subgroup, seq, beta).map(|l| l.with_witness(record))
        }
        _ => Err(Error::Internal(format!(
            "witness does not fit family {family}"
        ))),
    }
}

/// The construction for a family instance with a caller-supplied `H`.
pub fn label_with_subgroup(
    family: Family,
    params: &FamilyParams,
    g: &GroupSpec,
    h: &Subgroup,
) -> Result<Labeling> {
    let p = |name: &str| {
        match name {
            "n" => params.n,
            "m" => params.m,
            _ => params.k,
        }
        .ok_or_else(|| Error::InvalidParameter {
            family: family.to_string(),
            reason: format!("missing parameter {name}"),
        })
    };
    match family {
        Family::Cycle => Err(Error::Unsupported(
            "cycles are labeled from Γ itself; no subgroup is used".into(),
        )),
        Family::Wheel => label_wheel(p("n")?, g, h),
        Family::Superwheel => label_superwheel(p("k")?, p("n")?, g, h),
        Family::Windmill => label_windmill(p("n")?, p("m")?, g, h),
        Family::Prism => label_prism(p("m")?, p("n")?, g, h),
        Family::ClosedWeb => label_closed_web(p("m")?, p("n")?, g, h),
        Family::OpenWeb => label_open_web(p("m")?, p("n")?, g, h),
        Family::Custom => Err(Error::Unsupported(
            "no construction for custom graphs".into(),
        )),
    }
}

/// Finds a witness and builds the labeling. `Ok(None)` means no subgroup
/// satisfies the hypothesis; even-blade windmills are unsupported.
pub fn construct(family: Family, params: &FamilyParams, g: &GroupSpec) -> Result<Option<Labeling>> {
    if family == Family::Windmill && params.m.is_some_and(|m| m % 2 == 0) {
        families::gen(family, params)?;
        return Err(Error::Unsupported(format!(
            "windmill with an even number of blades (m = {})",
            params.m.unwrap_or_default()
        )));
    }
    match find_witness(family, params, g)? {
        Some(w) => label_with_witness(family, params, g, &w).map(Some),
        None => Ok(None),
    }
}

/// Lex-first subgroup (by sorted element ranks) satisfying the family's
/// hypothesis, or `None`.
pub fn find_witness(
    family: Family,
    params: &FamilyParams,
    g: &GroupSpec,
) -> Result<Option<Witness>> {
    Ok(scan(family, params, g, true)?.into_iter().next())
}

/// Every qualifying subgroup, in lex order.
pub fn all_witnesses(family: Family, params: &FamilyParams, g: &GroupSpec) -> Result<Vec<Witness>> {
    scan(family, params, g, false)
}

fn scan(
    family: Family,
    params: &FamilyParams,
    g: &GroupSpec,
    first_only: bool,
) -> Result<Vec<Witness>> {
    let hyp = Hypothesis::for_family(family)
        .ok_or_else(|| Error::Unsupported("no construction for custom graphs".into()))?;
    let graph = families::gen(family, params)?;
    check_order(graph.edge_count() as u64, g)?;
    let predicted_by = predictions(family, params, g);
    let n = params.n.expect("generated families have n");
    let cfg = SequenceConfig::default();
    let mut out = Vec::new();

    let witness = |subgroup: Subgroup, quotient: QuotientView, beta, cycle_seq| Witness {
        hypothesis: hyp,
        subgroup,
        quotient,
        beta,
        cycle_seq,
        predicted_by: predicted_by.clone(),
    };

    match family {
        Family::Cycle => {
            if let Some(seq) = harmonious_sequence(g)? {
                let whole = Subgroup::whole(g);
                let q = quotient(g, &whole)?;
                out.push(witness(
                    whole,
                    q,
                    None,
                    CycleSequence::Subgroup(seq.elements().to_vec()),
                ));
            }
        }
        Family::Wheel | Family::Superwheel => {
            for h in subgroups_of_order(g, n)? {
                if !is_harmonious_canonical(&h.canonical()?) {
                    continue;
                }
                if let Some(seq) = subgroup_sequence(&h, &cfg)? {
                    let q = quotient(g, &h)?;
                    out.push(witness(h, q, None, CycleSequence::Subgroup(seq)));
                    if first_only {
                        break;
                    }
                }
            }
        }
        Family::Windmill => {
            let m = params.m.expect("windmill has m");
            if m % 2 == 0 {
                return Ok(out);
            }
            for h in subgroups_of_order(g, m)? {
                let q = quotient(g, &h)?;
                if !is_harmonious_canonical(q.canonical()) {
                    continue;
                }
                if let Some(seq) = quotient_sequence(&q, &cfg)? {
                    out.push(witness(h, q, None, CycleSequence::Quotient(seq)));
                    if first_only {
                        break;
                    }
                }
            }
        }
        Family::Prism | Family::ClosedWeb | Family::OpenWeb => {
            let index = g.order() / n;
            // a cyclic quotient of order q forces a cyclic subgroup of order q
            if g.nested()[0] % index != 0 {
                return Ok(out);
            }
            for h in subgroups_of_order(g, n)? {
                if !is_harmonious_canonical(&h.canonical()?) {
                    continue;
                }
                let q = quotient(g, &h)?;
                let Some(beta) = q.generator() else { continue };
                if let Some(seq) = subgroup_sequence(&h, &cfg)? {
                    out.push(witness(h, q, Some(beta), CycleSequence::Subgroup(seq)));
                    if first_only {
                        break;
                    }
                }
            }
        }
        Family::Custom => unreachable!("rejected above"),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::make_group;

    fn g(m: &[u64]) -> GroupSpec {
        make_group(m).unwrap()
    }

    fn sub(group: &GroupSpec, gens: &[&[u64]]) -> Subgroup {
        let gens: Vec<Element> = gens.iter().map(|c| group.element(c).unwrap()).collect();
        Subgroup::generated_by(group, &gens).unwrap()
    }

    #[test]
    fn cycles() {
        assert!(label_cycle(5, &g(&[5])).unwrap().unwrap().is_valid());
        assert!(label_cycle(4, &g(&[4])).unwrap().is_none());
        assert!(label_cycle(8, &g(&[4, 2])).unwrap().unwrap().is_valid());
        assert!(matches!(
            label_cycle(6, &g(&[5])),
            Err(Error::OrderMismatch { edges: 6, order: 5 })
        ));
    }

    #[test]
    fn superwheels() {
        // |SW_{3,5}| = 20, so Z5+Z5 (order 25) cannot carry it; Z10+Z2 can
        let z55 = g(&[5, 5]);
        assert!(matches!(
            label_superwheel(3, 5, &z55, &sub(&z55, &[&[1, 0]])),
            Err(Error::OrderMismatch {
                edges: 20,
                order: 25
            })
        ));
        let z10_2 = g(&[10, 2]);
        assert!(label_superwheel(3, 5, &z10_2, &sub(&z10_2, &[&[2, 0]]))
            .unwrap()
            .is_valid());

        let z424 = g(&[4, 2, 4]);
        let w = find_witness(Family::Superwheel, &FamilyParams::kn(3, 8), &z424)
            .unwrap()
            .unwrap();
        assert!(label_superwheel(3, 8, &z424, &w.subgroup)
            .unwrap()
            .is_valid());

        for n in [3u64, 5, 7] {
            for group in crate::abelian::abelian_groups_of_order(2 * n) {
                let w = find_witness(Family::Wheel, &FamilyParams::n(n), &group)
                    .unwrap()
                    .unwrap();
                assert!(label_wheel(n, &group, &w.subgroup).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn superwheel_cosets() {
        let group = g(&[10, 2]);
        let h = sub(&group, &[&[2, 0]]);
        let l = label_superwheel(3, 5, &group, &h).unwrap();
        let q = quotient(&group, &h).unwrap();
        let w = l.edge_labels();
        // spokes of hub j first, then the rim
        for j in 0..3 {
            let mut got: Vec<usize> = w[j * 5..(j + 1) * 5]
                .iter()
                .map(|x| q.coset_of(x))
                .collect();
            got.dedup();
            assert_eq!(got, vec![j + 1]);
        }
        assert!(w[15..].iter().all(|x| h.contains(x)));
    }

    #[test]
    fn windmill_matches_worked_example() {
        let group = g(&[5, 3]);
        let h = sub(&group, &[&[0, 1]]);
        let l = label_windmill(5, 3, &group, &h).unwrap();
        assert_eq!(l.label(&VertexId::Center).unwrap(), &group.identity());
        for j in 1..=3u32 {
            for i in 1..=4u32 {
                let expected = group.element(&[i as u64, (j - 1) as u64]).unwrap();
                assert_eq!(
                    l.label(&VertexId::Blade { blade: j, index: i }).unwrap(),
                    &expected
                );
            }
        }
    }

    #[test]
    fn windmills() {
        let z9 = g(&[9]);
        assert!(label_windmill(3, 3, &z9, &sub(&z9, &[&[3]]))
            .unwrap()
            .is_valid());
        let z6 = g(&[6]);
        assert!(matches!(
            label_windmill(3, 2, &z6, &sub(&z6, &[&[3]])),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            construct(Family::Windmill, &FamilyParams::mn(2, 3), &z6),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn windmill_blades_are_disjoint() {
        let group = g(&[3, 5, 3]);
        let w = find_witness(Family::Windmill, &FamilyParams::mn(3, 15), &group)
            .unwrap()
            .unwrap();
        let l = label_with_witness(Family::Windmill, &FamilyParams::mn(3, 15), &group, &w).unwrap();
        let labels = l.edge_labels();
        let blades: Vec<&[Element]> = labels.chunks(15).collect();
        for (a, blade) in blades.iter().enumerate() {
            let mut sorted = blade.to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 15);
            for other in &blades[a + 1..] {
                assert!(blade.iter().all(|x| !other.contains(x)));
            }
        }
    }

    #[test]
    fn prisms() {
        let z55 = g(&[5, 5]);
        assert!(label_prism(3, 5, &z55, &sub(&z55, &[&[1, 0]]))
            .unwrap()
            .is_valid());
        let z425 = g(&[4, 2, 5]);
        let w = find_witness(Family::Prism, &FamilyParams::mn(3, 8), &z425)
            .unwrap()
            .unwrap();
        assert!(label_prism(3, 8, &z425, &w.subgroup).unwrap().is_valid());
        assert!(
            find_witness(Family::Prism, &FamilyParams::mn(2, 4), &g(&[12]))
                .unwrap()
                .is_none()
        );
        assert!(
            find_witness(Family::Prism, &FamilyParams::mn(2, 4), &g(&[2, 2, 3]))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn prism_witness_is_lex_first() {
        let z55 = g(&[5, 5]);
        let w = find_witness(Family::Prism, &FamilyParams::mn(3, 5), &z55)
            .unwrap()
            .unwrap();
        assert_eq!(w.subgroup, sub(&z55, &[&[0, 1]]));
        assert_eq!(w.beta, Some(z55.element(&[1, 0]).unwrap()));
        assert_eq!(w.predicted_by, vec![Prediction::OddPrism]);
    }

    #[test]
    fn prism_layer_cosets() {
        let group = g(&[4, 2, 5]);
        let params = FamilyParams::mn(3, 8);
        let w = find_witness(Family::Prism, &params, &group)
            .unwrap()
            .unwrap();
        let beta = w.beta.clone().unwrap();
        let l = label_with_witness(Family::Prism, &params, &group, &w).unwrap();
        let labels = l.edge_labels();
        let coset = |k: u64| w.quotient.coset_of(&beta.scale(k));
        // per layer: 8 cycle edges, then 8 rungs
        for (chunk, block) in labels.chunks(8).enumerate() {
            let (j, rung) = (chunk as u64 / 2, chunk % 2 == 1);
            let want = if rung { coset(2 * j + 1) } else { coset(2 * j) };
            assert!(
                block.iter().all(|x| w.quotient.coset_of(x) == want),
                "layer {j} rung {rung}"
            );
        }
    }

    #[test]
    fn closed_webs() {
        let z56 = g(&[5, 6]);
        let w = find_witness(Family::ClosedWeb, &FamilyParams::mn(3, 5), &z56)
            .unwrap()
            .unwrap();
        assert!(label_closed_web(3, 5, &z56, &w.subgroup)
            .unwrap()
            .is_valid());

        let z426 = g(&[4, 2, 6]);
        let params = FamilyParams::mn(3, 8);
        let w = find_witness(Family::ClosedWeb, &params, &z426)
            .unwrap()
            .unwrap();
        assert!(label_closed_web(3, 8, &z426, &w.subgroup)
            .unwrap()
            .is_valid());
        // nested form [12, 2, 2] meets none of the four even cases
        assert!(predictions(Family::ClosedWeb, &params, &z426).is_empty());

        let z12 = g(&[12]);
        assert!(label_closed_web(2, 3, &z12, &sub(&z12, &[&[4]]))
            .unwrap()
            .is_valid());

        // one layer is the wheel: quotient of order 2
        let z10 = g(&[10]);
        assert!(label_closed_web(1, 5, &z10, &sub(&z10, &[&[2]]))
            .unwrap()
            .is_valid());
    }

    #[test]
    fn open_webs() {
        let z55 = g(&[5, 5]);
        let w = find_witness(Family::OpenWeb, &FamilyParams::mn(3, 5), &z55)
            .unwrap()
            .unwrap();
        assert!(label_open_web(3, 5, &z55, &w.subgroup).unwrap().is_valid());
        let z425 = g(&[4, 2, 5]);
        let w = find_witness(Family::OpenWeb, &FamilyParams::mn(3, 8), &z425)
            .unwrap()
            .unwrap();
        assert!(label_open_web(3, 8, &z425, &w.subgroup).unwrap().is_valid());
        let z9 = g(&[9]);
        assert!(label_open_web(2, 3, &z9, &sub(&z9, &[&[3]]))
            .unwrap()
            .is_valid());
    }

    #[test]
    fn hypothesis_failures_name_the_condition() {
        let z12 = g(&[12]);
        let err = label_prism(2, 4, &z12, &sub(&z12, &[&[3]])).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis(msg) if msg.contains("harmonious")),
            "{err}"
        );

        let klein3 = g(&[2, 2, 3]);
        let err = label_closed_web(2, 3, &klein3, &sub(&klein3, &[&[0, 0, 1]])).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis(msg) if msg.contains("not cyclic")),
            "{err}"
        );

        let err = label_prism(2, 4, &z12, &sub(&z12, &[&[4]])).unwrap_err();
        assert!(
            matches!(&err, Error::Hypothesis(msg) if msg.contains("order")),
            "{err}"
        );

        let z9 = g(&[9]);
        let err = label_prism(2, 4, &z9, &sub(&z9, &[&[3]])).unwrap_err();
        assert!(matches!(
            err,
            Error::OrderMismatch {
                edges: 12,
                order: 9
            }
        ));
    }

    #[test]
    fn json_round_trip_and_dot() {
        let z55 = g(&[5, 5]);
        let l = label_prism(3, 5, &z55, &sub(&z55, &[&[1, 0]])).unwrap();
        let text = l.to_json_pretty().unwrap();
        assert_eq!(Labeling::from_json_str(&text).unwrap(), l);
        let dot = l.to_dot();
        assert!(dot.contains("label=\"(1,0)\""));
        assert_eq!(dot.matches(" -- ").count(), 25);

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["labels"].as_object_mut().unwrap().remove("x.0.1");
        assert!(matches!(
            Labeling::from_json_str(&value.to_string()),
            Err(Error::Malformed(_))
        ));
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["labels"]["x.0.1"] = serde_json::json!([7, 0]);
        assert!(matches!(
            Labeling::from_json_str(&value.to_string()),
            Err(Error::Malformed(_))
        ));
    }
}
