//! The ground-truth check: `f` injective and the induced edge sums a
//! bijection onto the group.

use std::collections::{BTreeMap, HashMap};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::abelian::Element;
use crate::construct::Labeling;
use crate::families::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub valid: bool,
    pub vertex_collisions: Vec<(VertexId, VertexId)>,
    #[serde(serialize_with = "counts_as_pairs")]
    pub edge_label_multiset: BTreeMap<Element, usize>,
    pub missing_edge_labels: Vec<Element>,
    /// `(|E|, |Γ|)` when they differ.
    pub order_mismatch: Option<(usize, u64)>,
}

impl Certificate {
    /// Edge labels hit more than once.
    pub fn repeated_edge_labels(&self) -> Vec<&Element> {
        self.edge_label_multiset
            .iter()
            .filter(|(_, &c)| c > 1)
            .map(|(e, _)| e)
            .collect()
    }
}

fn counts_as_pairs<S: Serializer>(map: &BTreeMap<Element, usize>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(map.len()))?;
    for (label, count) in map {
        seq.serialize_element(&(label, count))?;
    }
    seq.end()
}

/// Never fails: an invalid labeling is reported in the certificate.
pub fn check(l: &Labeling) -> Certificate {
    let graph = l.graph();
    let group = l.group();
    let labels = l.labels();

    let mut first_with: HashMap<&Element, usize> = HashMap::new();
    let mut vertex_collisions = Vec::new();
    for (v, label) in labels.iter().enumerate() {
        match first_with.get(label) {
            Some(&u) => {
                vertex_collisions.push((graph.vertices()[u].clone(), graph.vertices()[v].clone()))
            }
            None => {
                first_with.insert(label, v);
            }
        }
    }

    let mut edge_label_multiset = BTreeMap::new();
    for &(a, b) in graph.edges() {
        let w = labels[a]
            .add(&labels[b])
            .expect("labels share the labeling's group");
        *edge_label_multiset.entry(w).or_insert(0) += 1;
    }
    let missing_edge_labels: Vec<Element> = group
        .elements()
        .filter(|x| !edge_label_multiset.contains_key(x))
        .collect();
    let order_mismatch =
        (graph.edge_count() as u64 != group.order()).then(|| (graph.edge_count(), group.order()));

    let valid = vertex_collisions.is_empty()
        && edge_label_multiset.values().all(|&c| c == 1)
        && missing_edge_labels.is_empty()
        && order_mismatch.is_none();
    Certificate {
        valid,
        vertex_collisions,
        edge_label_multiset,
        missing_edge_labels,
        order_mismatch,
    }
}
