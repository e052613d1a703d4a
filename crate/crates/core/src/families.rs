//! Generators for the cycle-related graph families.
//!
//! Vertex naming: `center` for a windmill or web center, `hub.j` for the
//! `j`-th superwheel hub, `x.j.i` for vertex `i` (1-based) of cycle layer `j`,
//! and `v.j.i` for vertex `i` of windmill blade `j`. Prism layers run
//! `0..m`, web layers `1..=m`, and plain cycles, wheels and superwheels use
//! layer 0. Vertices are listed center/hubs first, then layers top to
//! bottom, each in ascending `i`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cycle,
    Wheel,
    Superwheel,
    Windmill,
    Prism,
    ClosedWeb,
    OpenWeb,
    /// Arbitrary edge list supplied by the user.
    Custom,
}

impl Family {
    pub const GENERATED: [Family; 7] = [
        Family::Cycle,
        Family::Wheel,
        Family::Superwheel,
        Family::Windmill,
        Family::Prism,
        Family::ClosedWeb,
        Family::OpenWeb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Wheel => "wheel",
            Family::Superwheel => "superwheel",
            Family::Windmill => "windmill",
            Family::Prism => "prism",
            Family::ClosedWeb => "closed_web",
            Family::OpenWeb => "open_web",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s.replace('-', "_").as_str() {
            "cycle" => Family::Cycle,
            "wheel" => Family::Wheel,
            "superwheel" => Family::Superwheel,
            "windmill" => Family::Windmill,
            "prism" => Family::Prism,
            "closed_web" => Family::ClosedWeb,
            "open_web" => Family::OpenWeb,
            "custom" => Family::Custom,
            _ => return Err(Error::Malformed(format!("unknown family `{s}`"))),
        };
        Ok(family)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Center,
    Hub(u32),
    Cycle { layer: u32, index: u32 },
    Blade { blade: u32, index: u32 },
    Named(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Center => f.write_str("center"),
            VertexId::Hub(j) => write!(f, "hub.{j}"),
            VertexId::Cycle { layer, index } => write!(f, "x.{layer}.{index}"),
            VertexId::Blade { blade, index } => write!(f, "v.{blade}.{index}"),
            VertexId::Named(name) => f.write_str(name),
        }
    }
}

impl FromStr for VertexId {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('.').collect();
        let num = |p: &str| p.parse::<u32>().ok();
        let id = match parts.as_slice() {
            ["center"] => Some(VertexId::Center),
            ["hub", j] => num(j).map(VertexId::Hub),
            ["x", j, i] => num(j)
                .zip(num(i))
                .map(|(layer, index)| VertexId::Cycle { layer, index }),
            ["v", j, i] => num(j)
                .zip(num(i))
                .map(|(blade, index)| VertexId::Blade { blade, index }),
            _ => None,
        };
        Ok(id.unwrap_or_else(|| VertexId::Named(s.to_string())))
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().expect("infallible"))
    }
}

/// Family parameters; which ones are required depends on the family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub k: Option<u64>,
}

impl FamilyParams {
    pub fn n(n: u64) -> Self {
        FamilyParams {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn mn(m: u64, n: u64) -> Self {
        FamilyParams {
            n: Some(n),
            m: Some(m),
            k: None,
        }
    }

    pub fn kn(k: u64, n: u64) -> Self {
        FamilyParams {
            n: Some(n),
            m: None,
            k: Some(k),
        }
    }

    fn from_map(map: &BTreeMap<String, u64>) -> Self {
        FamilyParams {
            n: map.get("n").copied(),
            m: map.get("m").copied(),
            k: map.get("k").copied(),
        }
    }

    fn require(&self, family: Family, name: &str) -> Result<u64> {
        let value = match name {
            "n" => self.n,
            "m" => self.m,
            _ => self.k,
        };
        value.ok_or_else(|| Error::InvalidParameter {
            family: family.to_string(),
            reason: format!("missing parameter {name}"),
        })
    }
}

/// A generated graph: vertex ids plus edges as index pairs into `vertices`.
#[derive(Debug, Clone)]
pub struct FamilyGraph {
    family: Family,
    params: BTreeMap<String, u64>,
    vertices: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    index: HashMap<VertexId, usize>,
}

impl PartialEq for FamilyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.params == other.params
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl Eq for FamilyGraph {}

impl FamilyGraph {
    fn build(
        family: Family,
        params: BTreeMap<String, u64>,
        vertices: Vec<VertexId>,
        edges: Vec<(usize, usize)>,
    ) -> FamilyGraph {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        FamilyGraph {
            family,
            params,
            vertices,
            edges,
            index,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, u64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.get(name).copied()
    }

    pub fn family_params(&self) -> FamilyParams {
        FamilyParams::from_map(&self.params)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (&self.vertices[a], &self.vertices[b]))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// No loops and no repeated edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges
            .iter()
            .all(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graph with arbitrary vertex names. Rejects loops, repeated edges and
    /// unknown endpoints.
    pub fn custom(vertices: Vec<VertexId>, edges: &[(VertexId, VertexId)]) -> Result<FamilyGraph> {
        let graph = FamilyGraph::build(Family::Custom, BTreeMap::new(), vertices, Vec::new());
        if graph.index.len() != graph.vertices.len() {
            return Err(Error::Malformed("duplicate vertex id".into()));
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = graph
                .index_of(a)
                .ok_or_else(|| Error::Malformed(format!("unknown vertex {a}")))?;
            let ib = graph
                .index_of(b)
                .ok_or_else(|| Error::Malformed(format!("unknown vertex {b}")))?;
            pairs.push((ia, ib));
        }
        let graph = FamilyGraph {
            edges: pairs,
            ..graph
        };
        if !graph.is_simple() {
            return Err(Error::Malformed(
                "graph has a loop or a repeated edge".into(),
            ));
        }
        Ok(graph)
    }
}

fn invalid(family: Family, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn at_least(family: Family, name: &str, value: u64, min: u64) -> Result<u32> {
    if value < min {
        return Err(invalid(
            family,
            format!("{name} = {value}, must be at least {min}"),
        ));
    }
    u32::try_from(value).map_err(|_| invalid(family, format!("{name} = {value} is too large")))
}

/// Generates a family instance.
pub fn gen(family: Family, params: &FamilyParams) -> Result<FamilyGraph> {
    match family {
        Family::Cycle => cycle(params.require(family, "n")?),
        Family::Wheel => wheel(params.require(family, "n")?),
        Family::Superwheel => {
            superwheel(params.require(family, "k")?, params.require(family, "n")?)
        }
        Family::Windmill => windmill(params.require(family, "n")?, params.require(family, "m")?),
        Family::Prism => prism(params.require(family, "m")?, params.require(family, "n")?),
        Family::ClosedWeb => closed_web(params.require(family, "m")?, params.require(family, "n")?),
        Family::OpenWeb => open_web(params.require(family, "m")?, params.require(family, "n")?),
        Family::Custom => Err(invalid(family, "custom graphs are not generated")),
    }
}

/// Edge count of a family instance, from the closed formulas.
pub fn expected_edge_count(family: Family, params: &FamilyParams) -> Result<u64> {
    let n = params.require(family, "n")?;
    Ok(match family {
        Family::Cycle => n,
        Family::Wheel => 2 * n,
        Family::Superwheel => (params.require(family, "k")? + 1) * n,
        Family::Windmill => n * params.require(family, "m")?,
        Family::Prism | Family::OpenWeb => (2 * params.require(family, "m")? - 1) * n,
        Family::ClosedWeb => 2 * params.require(family, "m")? * n,
        Family::Custom => return Err(invalid(family, "no formula for custom graphs")),
    })
}

struct Builder {
    vertices: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    index: HashMap<VertexId, usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn vertex(&mut self, v: VertexId) {
        self.index.insert(v.clone(), self.vertices.len());
        self.vertices.push(v);
    }

    fn edge(&mut self, a: VertexId, b: VertexId) {
        self.edges.push((self.index[&a], self.index[&b]));
    }

    fn layer(&mut self, layer: u32, n: u32) {
        for index in 1..=n {
            self.vertex(VertexId::Cycle { layer, index });
        }
    }

    fn cycle_edges(&mut self, layer: u32, n: u32) {
        for i in 1..=n {
            self.edge(
                VertexId::Cycle { layer, index: i },
                VertexId::Cycle {
                    layer,
                    index: i % n + 1,
                },
            );
        }
    }

    fn rungs(&mut self, layer: u32, n: u32) {
        for index in 1..=n {
            self.edge(
                VertexId::Cycle { layer, index },
                VertexId::Cycle {
                    layer: layer + 1,
                    index,
                },
            );
        }
    }

    fn finish(self, family: Family, params: &[(&str, u64)]) -> FamilyGraph {
        let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        FamilyGraph {
            family,
            params,
            vertices: self.vertices,
            edges: self.edges,
            index: self.index,
        }
    }
}

pub fn cycle(n: u64) -> Result<FamilyGraph> {
    let n32 = at_least(Family::Cycle, "n", n, 3)?;
    let mut b = Builder::new();
    b.layer(0, n32);
    b.cycle_edges(0, n32);
    Ok(b.finish(Family::Cycle, &[("n", n)]))
}

pub fn wheel(n: u64) -> Result<FamilyGraph> {
    let n32 = at_least(Family::Wheel, "n", n, 3)?;
    Ok(hubbed(1, n32).finish(Family::Wheel, &[("n", n)]))
}

pub fn superwheel(k: u64, n: u64) -> Result<FamilyGraph> {
    let k32 = at_least(Family::Superwheel, "k", k, 1)?;
    let n32 = at_least(Family::Superwheel, "n", n, 3)?;
    Ok(hubbed(k32, n32).finish(Family::Superwheel, &[("k", k), ("n", n)]))
}

fn hubbed(k: u32, n: u32) -> Builder {
    let mut b = Builder::new();
    for j in 1..=k {
        b.vertex(VertexId::Hub(j));
    }
    b.layer(0, n);
    for j in 1..=k {
        for index in 1..=n {
            b.edge(VertexId::Hub(j), VertexId::Cycle { layer: 0, index });
        }
    }
    b.cycle_edges(0, n);
    b
}

/// Dutch windmill `D_n^m`: `m` copies of `C_n` sharing the center.
pub fn windmill(n: u64, m: u64) -> Result<FamilyGraph> {
    let n32 = at_least(Family::Windmill, "n", n, 3)?;
    let m32 = at_least(Family::Windmill, "m", m, 2)?;
    let mut b = Builder::new();
    b.vertex(VertexId::Center);
    for blade in 1..=m32 {
        for index in 1..n32 {
            b.vertex(VertexId::Blade { blade, index });
        }
    }
    for blade in 1..=m32 {
        let v = |index| VertexId::Blade { blade, index };
        b.edge(VertexId::Center, v(1));
        for i in 1..n32 - 1 {
            b.edge(v(i), v(i + 1));
        }
        b.edge(v(n32 - 1), VertexId::Center);
    }
    Ok(b.finish(Family::Windmill, &[("m", m), ("n", n)]))
}

/// Generalized prism `P_m □ C_n` with straight rungs `x(j,i) – x(j+1,i)`.
pub fn prism(m: u64, n: u64) -> Result<FamilyGraph> {
    let m32 = at_least(Family::Prism, "m", m, 2)?;
    let n32 = at_least(Family::Prism, "n", n, 3)?;
    let mut b = Builder::new();
    for j in 0..m32 {
        b.layer(j, n32);
    }
    for j in 0..m32 {
        b.cycle_edges(j, n32);
        if j + 1 < m32 {
            b.rungs(j, n32);
        }
    }
    Ok(b.finish(Family::Prism, &[("m", m), ("n", n)]))
}

pub fn closed_web(m: u64, n: u64) -> Result<FamilyGraph> {
    let m32 = at_least(Family::ClosedWeb, "m", m, 1)?;
    let n32 = at_least(Family::ClosedWeb, "n", n, 3)?;
    Ok(web(m32, n32, true).finish(Family::ClosedWeb, &[("m", m), ("n", n)]))
}

/// Closed web with the bottom cycle's edges removed.
pub fn open_web(m: u64, n: u64) -> Result<FamilyGraph> {
    let m32 = at_least(Family::OpenWeb, "m", m, 2)?;
    let n32 = at_least(Family::OpenWeb, "n", n, 3)?;
    Ok(web(m32, n32, false).finish(Family::OpenWeb, &[("m", m), ("n", n)]))
}

fn web(m: u32, n: u32, closed: bool) -> Builder {
    let mut b = Builder::new();
    b.vertex(VertexId::Center);
    for j in 1..=m {
        b.layer(j, n);
    }
    for index in 1..=n {
        b.edge(VertexId::Center, VertexId::Cycle { layer: 1, index });
    }
    for j in 1..=m {
        if j < m || closed {
            b.cycle_edges(j, n);
        }
        if j < m {
            b.rungs(j, n);
        }
    }
    b
}

fn custom_family() -> Family {
    Family::Custom
}

/// Raw edge-list files may omit the family (custom), the params, and the
/// vertex list (taken from the edges in order of first appearance).
#[derive(Serialize, Deserialize)]
struct GraphJson {
    #[serde(default = "custom_family")]
    family: Family,
    #[serde(default)]
    params: BTreeMap<String, u64>,
    #[serde(default)]
    vertices: Vec<VertexId>,
    edges: Vec<[VertexId; 2]>,
}

impl Serialize for FamilyGraph {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            family: self.family,
            params: self.params.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edge_ids()
                .map(|(a, b)| [a.clone(), b.clone()])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FamilyGraph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        FamilyGraph::from_json(raw).map_err(serde::de::Error::custom)
    }
}

impl FamilyGraph {
    /// Generated families must match their generator exactly (as vertex and
    /// unordered edge sets); custom graphs are taken as given.
    fn from_json(raw: GraphJson) -> Result<FamilyGraph> {
        let edges: Vec<(VertexId, VertexId)> = raw.edges.into_iter().map(|[a, b]| (a, b)).collect();
        let mut vertices = raw.vertices;
        if vertices.is_empty() {
            let mut seen = HashSet::new();
            for (a, b) in &edges {
                for v in [a, b] {
                    if seen.insert(v.clone()) {
                        vertices.push(v.clone());
                    }
                }
            }
        }
        let given = FamilyGraph::custom(vertices, &edges)?;
        if raw.family == Family::Custom {
            return Ok(given);
        }
        let expected = gen(raw.family, &FamilyParams::from_map(&raw.params))?;
        let key = |g: &FamilyGraph| {
            let vs: HashSet<&VertexId> = g.vertices.iter().collect();
            let es: HashSet<(String, String)> = g
                .edge_ids()
                .map(|(a, b)| {
                    let (a, b) = (a.to_string(), b.to_string());
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect();
            (
                vs.into_iter()
                    .map(|v| v.to_string())
                    .collect::<HashSet<_>>(),
                es,
            )
        };
        if key(&given) != key(&expected) {
            return Err(Error::Malformed(format!(
                "graph does not match the {} generator for {:?}",
                raw.family, raw.params
            )));
        }
        Ok(expected)
    }
}
