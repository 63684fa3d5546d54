use std::collections::{BTreeMap, BTreeSet};

use super::ast::{ArtifactDef, Specification};

/// Artifact reference graph: an edge A → B means A's definition mentions B.
/// Only references that name a defined artifact become edges; sensors and
/// unresolved names are validation concerns, not graph nodes.
#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    edges: BTreeMap<String, Vec<String>>,
}

/// Names that a single artifact definition depends on.
pub fn artifact_references(artifact: &ArtifactDef) -> Vec<String> {
    let mut refs = Vec::new();
    match artifact {
        ArtifactDef::Rule(d) => {
            d.body.for_each_ref(&mut |name, _| {
                if !d.context.iter().any(|c| c == name) {
                    refs.push(name.to_string());
                }
            });
        }
        ArtifactDef::Function(d) => {
            d.body.for_each_ref(&mut |name, _| {
                if !d.context.iter().any(|c| c == name) {
                    refs.push(name.to_string());
                }
            });
        }
        ArtifactDef::Metric(d) => refs.push(d.context.clone()),
        ArtifactDef::TimeRoutine(d) => {
            refs.extend(d.includes.iter().cloned());
            refs.extend(d.excludes.iter().cloned());
        }
        // Characteristic axes are sensors, never artifacts.
        ArtifactDef::Characteristic(_) => {}
    }
    refs
}

pub fn build_dependency_graph(spec: &Specification) -> DependencyGraph {
    let defined: BTreeSet<&str> = spec.artifacts.iter().map(|a| a.name()).collect();
    let mut edges = BTreeMap::new();
    for artifact in &spec.artifacts {
        let mut deps: Vec<String> = artifact_references(artifact)
            .into_iter()
            .filter(|r| defined.contains(r.as_str()))
            .collect();
        deps.sort();
        deps.dedup();
        edges.insert(artifact.name().to_string(), deps);
    }
    DependencyGraph { edges }
}

impl DependencyGraph {
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.edges.keys().map(String::as_str)
    }

    pub fn dependencies(&self, name: &str) -> &[String] {
        self.edges.get(name).map(Vec::as_slice).unwrap_or_default()
    }

    /// Artifact names ordered so every artifact appears after everything it
    /// references. On a cycle, the offending path is returned, first node
    /// repeated at the end (e.g. `[A, B, A]`).
    pub fn topo_order(&self) -> Result<Vec<String>, Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Unseen,
            InProgress,
            Done,
        }
        let mut marks: BTreeMap<&str, Mark> =
            self.edges.keys().map(|k| (k.as_str(), Mark::Unseen)).collect();
        let mut order = Vec::with_capacity(self.edges.len());

        fn visit<'a>(
            node: &'a str,
            graph: &'a BTreeMap<String, Vec<String>>,
            marks: &mut BTreeMap<&'a str, Mark>,
            path: &mut Vec<&'a str>,
            order: &mut Vec<String>,
        ) -> Result<(), Vec<String>> {
            match marks[node] {
                Mark::Done => return Ok(()),
                Mark::InProgress => {
                    let start = path.iter().position(|n| *n == node).unwrap();
                    let mut cycle: Vec<String> =
                        path[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(node.to_string());
                    return Err(cycle);
                }
                Mark::Unseen => {}
            }
            marks.insert(node, Mark::InProgress);
            path.push(node);
            if let Some(deps) = graph.get(node) {
                for dep in deps {
                    visit(dep, graph, marks, path, order)?;
                }
            }
            path.pop();
            marks.insert(node, Mark::Done);
            order.push(node.to_string());
            Ok(())
        }

        let mut path = Vec::new();
        for node in self.edges.keys() {
            visit(node, &self.edges, &mut marks, &mut path, &mut order)?;
        }
        Ok(order)
    }
}
