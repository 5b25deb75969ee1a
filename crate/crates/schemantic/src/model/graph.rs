//! Typed circuit graph over the triple substrate.
//!
//! A [`CircuitGraph`] holds components, junctions, crossovers, ports, and
//! unordered connections, plus derived function annotations. Graphs are
//! immutable after construction (build one with [`CircuitGraphBuilder`]),
//! so they are safe to share read-only across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::triple::{is_valid_qname, Atom, Bindings, Term, Triple, TripleStore};

use super::vocab::{iri, is_scaffold_class, ComponentClass, FunctionClass, VocabError, Vocabulary};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid node id '{0}': must be usable as an IRI local name")]
    InvalidId(String),
    #[error("duplicate id '{0}'")]
    DuplicateId(String),
    #[error("unknown node '{0}' referenced")]
    UnknownNode(String),
    #[error("unknown component '{0}'")]
    UnknownComponent(String),
    #[error("self-connection on '{0}'")]
    SelfConnection(String),
    #[error("port '{port}' has {count} owners; exactly one required")]
    PortOwners { port: String, count: usize },
    #[error("junction '{junction}' cannot own port '{port}'")]
    JunctionOwnsPort { junction: String, port: String },
    #[error("node '{0}' has no class")]
    MissingClass(String),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

/// Identifier of a node or port; always usable as an IRI local name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(Atom);

impl NodeId {
    pub fn new(id: impl AsRef<str>) -> Result<NodeId, GraphError> {
        let id = id.as_ref();
        if is_valid_qname(&format!("w:{id}")) {
            Ok(NodeId(Atom::from(id)))
        } else {
            Err(GraphError::InvalidId(id.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The node's instance IRI, e.g. `w:R1`.
    pub fn iri(&self) -> Term {
        Term::iri(format!("w:{}", self.0))
    }

    /// Recovers a node id from an instance IRI in the `w:` namespace.
    pub fn from_iri(term: &Term) -> Option<NodeId> {
        match (term.prefix(), term.local()) {
            (Some("w"), Some(local)) => Some(NodeId(Atom::from(local))),
            _ => None,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// What a graph node is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Component {
        class: ComponentClass,
        name: String,
        position: Option<(i64, i64)>,
    },
    /// Electrical connection point joining two or more wires.
    Junction,
    /// Two wires crossing without electrical contact; owns two pairs of
    /// opposite ports (`a_1`/`a_2` and `b_1`/`b_2`).
    Crossover,
}

/// A component terminal, owned by exactly one component (or crossover).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub owner: NodeId,
    pub name: String,
}

/// Why an annotation holds: the rule and variable assignment that fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub rule: String,
    pub bindings: Bindings,
}

/// A derived (component, function class) record with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionAnnotation {
    pub component: NodeId,
    pub class: FunctionClass,
    pub provenance: Vec<Provenance>,
}

/// Component view returned by [`CircuitGraph::components`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentView<'a> {
    pub id: &'a NodeId,
    pub class: &'a ComponentClass,
    pub name: &'a str,
    pub position: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Default)]
pub struct CircuitGraph {
    nodes: BTreeMap<NodeId, NodeKind>,
    ports: BTreeMap<NodeId, Port>,
    connections: BTreeSet<(NodeId, NodeId)>,
    annotations: Vec<FunctionAnnotation>,
}

/// Canonical, provenance-free structural view of a graph, for comparing
/// graphs up to annotation provenance (positions included or not).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStructure {
    pub nodes: Vec<(String, String)>,
    pub ports: Vec<(String, String, String)>,
    pub connections: Vec<(String, String)>,
    pub annotations: Vec<(String, String)>,
}

impl CircuitGraph {
    pub fn builder() -> CircuitGraphBuilder {
        CircuitGraphBuilder::default()
    }

    pub fn node(&self, id: &NodeId) -> Option<&NodeKind> {
        self.nodes.get(id)
    }

    pub fn port(&self, id: &NodeId) -> Option<&Port> {
        self.ports.get(id)
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentView<'_>> {
        self.nodes.iter().filter_map(|(id, kind)| match kind {
            NodeKind::Component {
                class,
                name,
                position,
            } => Some(ComponentView {
                id,
                class,
                name,
                position: *position,
            }),
            _ => None,
        })
    }

    pub fn junctions(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter_map(|(id, kind)| match kind {
            NodeKind::Junction => Some(id),
            _ => None,
        })
    }

    pub fn crossovers(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter_map(|(id, kind)| match kind {
            NodeKind::Crossover => Some(id),
            _ => None,
        })
    }

    pub fn ports(&self) -> impl Iterator<Item = (&NodeId, &Port)> {
        self.ports.iter()
    }

    /// Ports of one owner, in id order.
    pub fn ports_of<'a>(
        &'a self,
        owner: &'a NodeId,
    ) -> impl Iterator<Item = (&'a NodeId, &'a Port)> + 'a {
        self.ports.iter().filter(move |(_, p)| &p.owner == owner)
    }

    pub fn connections(&self) -> impl Iterator<Item = &(NodeId, NodeId)> {
        self.connections.iter()
    }

    pub fn annotations(&self) -> &[FunctionAnnotation] {
        &self.annotations
    }

    pub fn component_count(&self) -> usize {
        self.components().count()
    }

    pub fn contains_endpoint(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id) || self.ports.contains_key(id)
    }

    /// All function classes attached to a component.
    pub fn annotations_of(&self, id: &NodeId) -> Result<BTreeSet<&FunctionClass>, GraphError> {
        match self.nodes.get(id) {
            Some(NodeKind::Component { .. }) => Ok(self
                .annotations
                .iter()
                .filter(|a| &a.component == id)
                .map(|a| &a.class)
                .collect()),
            _ => Err(GraphError::UnknownComponent(id.to_string())),
        }
    }

    /// Returns a copy of this graph with `annotations` replacing any
    /// existing ones, sorted by (component, class).
    pub fn with_annotations(&self, mut annotations: Vec<FunctionAnnotation>) -> CircuitGraph {
        annotations.sort_by(|a, b| {
            (&a.component, &a.class).cmp(&(&b.component, &b.class))
        });
        CircuitGraph {
            nodes: self.nodes.clone(),
            ports: self.ports.clone(),
            connections: self.connections.clone(),
            annotations,
        }
    }

    /// Canonical structural view; set `with_positions: false` to compare
    /// graphs up to coordinates (e.g. under translation).
    pub fn structure(&self, with_positions: bool) -> GraphStructure {
        GraphStructure {
            nodes: self
                .nodes
                .iter()
                .map(|(id, kind)| {
                    let tag = match kind {
                        NodeKind::Component {
                            class,
                            name,
                            position,
                        } => {
                            let pos = match (with_positions, position) {
                                (true, Some((x, y))) => format!("@{x},{y}"),
                                _ => String::new(),
                            };
                            format!("component:{class}:{name}{pos}")
                        }
                        NodeKind::Junction => "junction".to_string(),
                        NodeKind::Crossover => "crossover".to_string(),
                    };
                    (id.to_string(), tag)
                })
                .collect(),
            ports: self
                .ports
                .iter()
                .map(|(id, p)| (id.to_string(), p.owner.to_string(), p.name.clone()))
                .collect(),
            connections: self
                .connections
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            annotations: self
                .annotations
                .iter()
                .map(|a| (a.component.to_string(), a.class.to_string()))
                .collect(),
        }
    }

    /// Emits the graph as triples:
    /// per component a type and name triple (plus position literals when
    /// set); per port an ownership, type, and name triple; per connection a
    /// single `w:connects` triple; per annotation a `w:has_function` triple;
    /// and per used class with a Wikidata link one `w:wikidata_link` triple.
    pub fn to_triples(&self, vocab: &Vocabulary) -> TripleStore {
        let mut store = TripleStore::new();
        let mut used_classes: BTreeSet<String> = BTreeSet::new();
        let mut add = |s: Term, p: &str, o: Term| {
            store
                .insert(Triple::new(s, Term::iri(p), o))
                .expect("graph triples are ground");
        };
        for (id, kind) in &self.nodes {
            match kind {
                NodeKind::Component {
                    class,
                    name,
                    position,
                } => {
                    let class_iri = class.iri();
                    used_classes.insert(class_iri.text().to_string());
                    add(id.iri(), iri::RDF_TYPE, class_iri);
                    add(id.iri(), iri::NAME, Term::literal(name));
                    if let Some((x, y)) = position {
                        add(id.iri(), iri::POS_X, Term::literal(x.to_string()));
                        add(id.iri(), iri::POS_Y, Term::literal(y.to_string()));
                    }
                }
                NodeKind::Junction => add(id.iri(), iri::RDF_TYPE, Term::iri(iri::JUNCTION)),
                NodeKind::Crossover => add(id.iri(), iri::RDF_TYPE, Term::iri(iri::CROSSOVER)),
            }
        }
        for (id, port) in &self.ports {
            add(port.owner.iri(), iri::HAS_PART, id.iri());
            add(id.iri(), iri::RDF_TYPE, Term::iri(iri::PORT));
            add(id.iri(), iri::NAME, Term::literal(&port.name));
        }
        for (a, b) in &self.connections {
            add(a.iri(), iri::CONNECTS, b.iri());
        }
        for annotation in &self.annotations {
            let class_iri = annotation.class.iri();
            used_classes.insert(class_iri.text().to_string());
            add(annotation.component.iri(), iri::HAS_FUNCTION, class_iri);
        }
        for class_iri in used_classes {
            if let Some(qid) = vocab.link_for(&class_iri) {
                add(
                    Term::iri(&class_iri),
                    iri::WIKIDATA_LINK,
                    Term::iri(format!("wd:{qid}")),
                );
            }
        }
        store
    }

    /// Reconstructs a graph from its triple form. Inverse of
    /// [`to_triples`](Self::to_triples) up to connection direction and
    /// annotation provenance. Unknown predicates are skipped and reported in
    /// the warning list; reasoner scaffolding is skipped silently.
    pub fn from_triples(
        store: &TripleStore,
        vocab: &Vocabulary,
    ) -> Result<(CircuitGraph, Vec<String>), GraphError> {
        let mut warnings = Vec::new();
        let mut builder = CircuitGraph::builder();

        let mut port_ids: BTreeSet<NodeId> = BTreeSet::new();
        let mut typed: BTreeSet<NodeId> = BTreeSet::new();
        let mut names: BTreeMap<NodeId, String> = BTreeMap::new();
        let mut positions: BTreeMap<NodeId, (Option<i64>, Option<i64>)> = BTreeMap::new();
        let mut owners: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let mut component_classes: BTreeMap<NodeId, ComponentClass> = BTreeMap::new();
        let mut structural: Vec<(NodeId, &'static str)> = Vec::new();
        let mut connections: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
        let mut annotations: BTreeMap<(NodeId, FunctionClass), Vec<Provenance>> = BTreeMap::new();

        let node_id = |term: &Term| -> Result<NodeId, GraphError> {
            NodeId::from_iri(term).ok_or_else(|| GraphError::InvalidId(term.text().to_string()))
        };

        for t in store.iter() {
            let predicate = t.predicate.text();
            match predicate {
                p if p == iri::RDF_TYPE => {
                    let class_text = t.object.text();
                    if is_scaffold_class(class_text) {
                        continue;
                    }
                    let id = node_id(&t.subject)?;
                    match class_text {
                        c if c == iri::PORT => {
                            port_ids.insert(id.clone());
                        }
                        c if c == iri::JUNCTION => structural.push((id.clone(), "junction")),
                        c if c == iri::CROSSOVER => structural.push((id.clone(), "crossover")),
                        _ => {
                            let class = vocab.component_class_from_iri(&t.object)?;
                            component_classes.insert(id.clone(), class);
                        }
                    }
                    typed.insert(id);
                }
                p if p == iri::NAME => {
                    if let Term::Literal(value) = &t.object {
                        names.insert(node_id(&t.subject)?, value.to_string());
                    } else {
                        warnings.push(format!("non-literal w:name object ignored: {}", t.object));
                    }
                }
                p if p == iri::POS_X || p == iri::POS_Y => {
                    let id = node_id(&t.subject)?;
                    match t.object.text().parse::<i64>() {
                        Ok(v) => {
                            let entry = positions.entry(id).or_default();
                            if p == iri::POS_X {
                                entry.0 = Some(v);
                            } else {
                                entry.1 = Some(v);
                            }
                        }
                        Err(_) => warnings.push(format!(
                            "non-integer position literal ignored on {}",
                            t.subject
                        )),
                    }
                }
                p if p == iri::HAS_PART => {
                    let owner = node_id(&t.subject)?;
                    let port = node_id(&t.object)?;
                    owners.entry(port).or_default().push(owner);
                }
                p if p == iri::CONNECTS => {
                    let a = node_id(&t.subject)?;
                    let b = node_id(&t.object)?;
                    let pair = if a <= b { (a, b) } else { (b, a) };
                    connections.insert(pair);
                }
                p if p == iri::HAS_FUNCTION => {
                    let component = node_id(&t.subject)?;
                    let class = vocab.function_class_from_iri(&t.object)?;
                    annotations.entry((component, class)).or_default();
                }
                p if p == iri::WIKIDATA_LINK => {} // class-level metadata
                p if crate::model::vocab::SCAFFOLD_PREDICATES.contains(&p) => {}
                other => warnings.push(format!("unknown predicate {other} ignored")),
            }
        }

        // Ports first (owner nodes must exist before ports are added).
        for (id, class) in &component_classes {
            let name = names.get(id).cloned().unwrap_or_else(|| id.to_string());
            let position = positions.get(id).and_then(|(x, y)| Some(((*x)?, (*y)?)));
            builder.add_component_id(id.clone(), class.clone(), name, position)?;
        }
        for (id, kind) in &structural {
            match *kind {
                "junction" => builder.add_junction_id(id.clone())?,
                _ => builder.add_crossover_id(id.clone())?,
            };
        }
        for port in &port_ids {
            let owner_list = owners.get(port).map(Vec::as_slice).unwrap_or(&[]);
            if owner_list.len() != 1 {
                return Err(GraphError::PortOwners {
                    port: port.to_string(),
                    count: owner_list.len(),
                });
            }
            let name = names.get(port).cloned().unwrap_or_else(|| port.to_string());
            builder.add_port_id(port.clone(), owner_list[0].clone(), name)?;
        }
        // has_part targets never typed as ports.
        for (port, owner_list) in &owners {
            if !port_ids.contains(port) {
                warnings.push(format!(
                    "has_part target {port} of {} is not typed w:PORT; ignored",
                    owner_list[0]
                ));
            }
        }
        for (a, b) in connections {
            if !builder.contains_endpoint(&a) {
                return Err(GraphError::MissingClass(a.to_string()));
            }
            if !builder.contains_endpoint(&b) {
                return Err(GraphError::MissingClass(b.to_string()));
            }
            builder.connect(a.as_str(), b.as_str())?;
        }
        for ((component, class), provenance) in annotations {
            builder.annotations.push(FunctionAnnotation {
                component,
                class,
                provenance,
            });
        }
        let graph = builder.build()?;
        Ok((graph, warnings))
    }

    /// Fills annotation provenance from derivation records whose triple is
    /// the annotation's `w:has_function` statement.
    pub fn attach_provenance(&mut self, derivations: &[crate::rules::Derivation]) {
        for annotation in &mut self.annotations {
            let triple = Triple::new(
                annotation.component.iri(),
                Term::iri(iri::HAS_FUNCTION),
                annotation.class.iri(),
            );
            annotation.provenance = derivations
                .iter()
                .filter(|d| d.triple == triple)
                .map(|d| Provenance {
                    rule: d.rule.clone(),
                    bindings: d.bindings.clone(),
                })
                .collect();
        }
    }
}

/// Mutable builder; validates references as they are added.
#[derive(Debug, Clone, Default)]
pub struct CircuitGraphBuilder {
    nodes: BTreeMap<NodeId, NodeKind>,
    ports: BTreeMap<NodeId, Port>,
    connections: BTreeSet<(NodeId, NodeId)>,
    annotations: Vec<FunctionAnnotation>,
}

impl CircuitGraphBuilder {
    fn check_fresh(&self, id: &NodeId) -> Result<(), GraphError> {
        if self.nodes.contains_key(id) || self.ports.contains_key(id) {
            return Err(GraphError::DuplicateId(id.to_string()));
        }
        Ok(())
    }

    pub fn add_component(
        &mut self,
        id: &str,
        class: ComponentClass,
        name: &str,
        position: Option<(i64, i64)>,
    ) -> Result<NodeId, GraphError> {
        self.add_component_id(NodeId::new(id)?, class, name.to_string(), position)
    }

    fn add_component_id(
        &mut self,
        id: NodeId,
        class: ComponentClass,
        name: String,
        position: Option<(i64, i64)>,
    ) -> Result<NodeId, GraphError> {
        self.check_fresh(&id)?;
        self.nodes.insert(
            id.clone(),
            NodeKind::Component {
                class,
                name,
                position,
            },
        );
        Ok(id)
    }

    pub fn add_junction(&mut self, id: &str) -> Result<NodeId, GraphError> {
        self.add_junction_id(NodeId::new(id)?)
    }

    fn add_junction_id(&mut self, id: NodeId) -> Result<NodeId, GraphError> {
        self.check_fresh(&id)?;
        self.nodes.insert(id.clone(), NodeKind::Junction);
        Ok(id)
    }

    pub fn add_crossover(&mut self, id: &str) -> Result<NodeId, GraphError> {
        self.add_crossover_id(NodeId::new(id)?)
    }

    fn add_crossover_id(&mut self, id: NodeId) -> Result<NodeId, GraphError> {
        self.check_fresh(&id)?;
        self.nodes.insert(id.clone(), NodeKind::Crossover);
        Ok(id)
    }

    pub fn add_port(&mut self, id: &str, owner: &str, name: &str) -> Result<NodeId, GraphError> {
        self.add_port_id(NodeId::new(id)?, NodeId::new(owner)?, name.to_string())
    }

    fn add_port_id(
        &mut self,
        id: NodeId,
        owner: NodeId,
        name: String,
    ) -> Result<NodeId, GraphError> {
        self.check_fresh(&id)?;
        match self.nodes.get(&owner) {
            Some(NodeKind::Component { .. }) | Some(NodeKind::Crossover) => {}
            Some(NodeKind::Junction) => {
                return Err(GraphError::JunctionOwnsPort {
                    junction: owner.to_string(),
                    port: id.to_string(),
                })
            }
            None => return Err(GraphError::UnknownNode(owner.to_string())),
        }
        self.ports.insert(id.clone(), Port { owner, name });
        Ok(id)
    }

    pub fn contains_endpoint(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id) || self.ports.contains_key(id)
    }

    /// Records an unordered connection between two existing endpoints
    /// (nodes or ports).
    pub fn connect(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let a = NodeId::new(a)?;
        let b = NodeId::new(b)?;
        if a == b {
            return Err(GraphError::SelfConnection(a.to_string()));
        }
        for id in [&a, &b] {
            if !self.contains_endpoint(id) {
                return Err(GraphError::UnknownNode(id.to_string()));
            }
        }
        let pair = if a <= b { (a, b) } else { (b, a) };
        self.connections.insert(pair);
        Ok(())
    }

    pub fn build(self) -> Result<CircuitGraph, GraphError> {
        Ok(CircuitGraph {
            nodes: self.nodes,
            ports: self.ports,
            connections: self.connections,
            annotations: self.annotations,
        })
    }
}
