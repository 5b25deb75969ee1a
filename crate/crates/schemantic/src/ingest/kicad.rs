//! KiCad 6+ schematic (`.kicad_sch`) ingestion: extract the symbol/wire
//! subset and build a circuit graph by exact coordinate matching.
//!
//! Coordinates are millimetres in the file and are scaled by 100 into
//! integer grid units on read; values needing more than two decimal places
//! are off-grid and rejected. Connectivity is exact coincidence of points:
//! wire endpoints touching pin positions, other wire endpoints, junction
//! markers, or label anchors merge into nets. No tolerance is applied.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{CircuitGraph, ComponentClass, GraphError, Vocabulary};

use super::sexpr::SExpr;
use super::IngestError;

/// Scaled integer sheet coordinate (hundredths of a millimetre).
pub type Point = (i64, i64);

/// A pin of a placed symbol, with its absolute sheet position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchPin {
    pub number: String,
    pub position: Point,
}

/// A placed schematic symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchSymbol {
    pub lib_id: String,
    pub reference: String,
    pub at: Point,
    pub rotation: i64,
    pub pins: Vec<SchPin>,
}

/// The schematic subset this toolchain understands.
#[derive(Debug, Clone, Default)]
pub struct SchematicSubset {
    pub symbols: Vec<SchSymbol>,
    pub wires: Vec<(Point, Point)>,
    pub junctions: Vec<Point>,
    pub no_connects: Vec<Point>,
    pub labels: Vec<(String, Point)>,
    /// Unsupported node kinds that were skipped, with counts.
    pub skipped: BTreeMap<String, usize>,
}

/// Parses a decimal millimetre value into hundredths. More than two decimal
/// places cannot be represented on the grid and is an error.
fn parse_coord(text: &str) -> Result<i64, IngestError> {
    let off_grid = || IngestError::OffGrid(text.to_string());
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(off_grid());
    }
    if frac.len() > 2 || !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(off_grid());
    }
    let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| off_grid())? };
    let mut frac_value: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| off_grid())? };
    if frac.len() == 1 {
        frac_value *= 10;
    }
    Ok(sign * (whole * 100 + frac_value))
}

fn parse_at(expr: &SExpr) -> Result<(Point, i64), IngestError> {
    let args = expr.args();
    let get = |i: usize| -> Result<&str, IngestError> {
        args.get(i)
            .and_then(SExpr::as_text)
            .ok_or_else(|| IngestError::Schematic("malformed (at ...) clause".into()))
    };
    let x = parse_coord(get(0)?)?;
    let y = parse_coord(get(1)?)?;
    let rotation = match args.get(2).and_then(SExpr::as_text) {
        Some(r) => r
            .parse::<f64>()
            .map_err(|_| IngestError::Schematic(format!("bad rotation '{r}'")))? as i64,
        None => 0,
    };
    Ok(((x, y), rotation))
}

/// Pin offsets per library symbol, in library coordinates (y up).
type LibPins = BTreeMap<String, Vec<(String, Point)>>;

fn collect_lib_pins(lib_symbols: &SExpr) -> Result<LibPins, IngestError> {
    let mut out = LibPins::new();
    for symbol in lib_symbols.children("symbol") {
        let Some(lib_id) = symbol.args().first().and_then(SExpr::as_text) else {
            continue;
        };
        let mut pins = Vec::new();
        collect_pins_rec(symbol, &mut pins)?;
        out.insert(lib_id.to_string(), pins);
    }
    Ok(out)
}

fn collect_pins_rec(expr: &SExpr, pins: &mut Vec<(String, Point)>) -> Result<(), IngestError> {
    let Some(items) = expr.as_list() else {
        return Ok(());
    };
    for item in items {
        if item.tag() == Some("pin") {
            let (position, _) = parse_at(item.child("at").ok_or_else(|| {
                IngestError::Schematic("library pin without (at ...)".into())
            })?)?;
            let number = item
                .child("number")
                .and_then(|n| n.args().first())
                .and_then(SExpr::as_text)
                .ok_or_else(|| IngestError::Schematic("library pin without number".into()))?;
            pins.push((number.to_string(), position));
        } else if item.as_list().is_some() {
            collect_pins_rec(item, pins)?;
        }
    }
    Ok(())
}

/// Transforms a library pin offset into sheet coordinates: flip the library
/// y axis (library y points up, the sheet y points down), apply mirroring,
/// rotate counter-clockwise in sheet space, translate to the symbol anchor.
/// Symbol rotations are cardinal in KiCad; anything else is rejected.
fn place_pin(
    at: Point,
    rotation: i64,
    mirror: Option<char>,
    pin_offset: Point,
) -> Result<Point, IngestError> {
    let (mut px, mut py) = pin_offset;
    match mirror {
        Some('x') => py = -py,
        Some('y') => px = -px,
        _ => {}
    }
    let (lx, ly) = (px, -py);
    let (rx, ry) = match rotation.rem_euclid(360) {
        0 => (lx, ly),
        90 => (ly, -lx),
        180 => (-lx, -ly),
        270 => (-ly, lx),
        other => {
            return Err(IngestError::Schematic(format!(
                "unsupported symbol rotation {other}; expected 0, 90, 180 or 270"
            )))
        }
    };
    Ok((at.0 + rx, at.1 + ry))
}

/// Extracts the supported subset from a parsed `kicad_sch` document.
/// Unsupported node kinds (text, sheets, images, ...) are skipped and
/// counted.
pub fn extract_schematic(tree: &SExpr) -> Result<SchematicSubset, IngestError> {
    if tree.tag() != Some("kicad_sch") {
        return Err(IngestError::Schematic(format!(
            "expected a (kicad_sch ...) document, found ({} ...)",
            tree.tag().unwrap_or("?")
        )));
    }
    let lib_pins = match tree.child("lib_symbols") {
        Some(libs) => collect_lib_pins(libs)?,
        None => LibPins::new(),
    };

    let mut subset = SchematicSubset::default();
    for node in tree.as_list().unwrap_or(&[]).iter().skip(1) {
        let Some(tag) = node.tag() else {
            continue; // positional atoms like the format marker
        };
        match tag {
            "lib_symbols" => {}
            "symbol" => subset.symbols.push(extract_symbol(node, &lib_pins)?),
            "wire" => {
                let pts = node
                    .child("pts")
                    .ok_or_else(|| IngestError::Schematic("wire without (pts ...)".into()))?;
                let points: Vec<Point> = pts
                    .children("xy")
                    .map(|xy| -> Result<Point, IngestError> {
                        let args = xy.args();
                        let x = args.first().and_then(SExpr::as_text).ok_or_else(|| {
                            IngestError::Schematic("wire point without x".into())
                        })?;
                        let y = args.get(1).and_then(SExpr::as_text).ok_or_else(|| {
                            IngestError::Schematic("wire point without y".into())
                        })?;
                        Ok((parse_coord(x)?, parse_coord(y)?))
                    })
                    .collect::<Result<_, _>>()?;
                if points.len() != 2 {
                    return Err(IngestError::Schematic(format!(
                        "wire with {} points; expected 2",
                        points.len()
                    )));
                }
                subset.wires.push((points[0], points[1]));
            }
            "junction" => {
                let (p, _) = parse_at(node.child("at").ok_or_else(|| {
                    IngestError::Schematic("junction without (at ...)".into())
                })?)?;
                subset.junctions.push(p);
            }
            "no_connect" => {
                let (p, _) = parse_at(node.child("at").ok_or_else(|| {
                    IngestError::Schematic("no_connect without (at ...)".into())
                })?)?;
                subset.no_connects.push(p);
            }
            "label" => {
                let name = node
                    .args()
                    .first()
                    .and_then(SExpr::as_text)
                    .ok_or_else(|| IngestError::Schematic("label without text".into()))?;
                let (p, _) = parse_at(node.child("at").ok_or_else(|| {
                    IngestError::Schematic("label without (at ...)".into())
                })?)?;
                subset.labels.push((name.to_string(), p));
            }
            other => {
                *subset.skipped.entry(other.to_string()).or_insert(0) += 1;
            }
        }
    }
    Ok(subset)
}

fn extract_symbol(node: &SExpr, lib_pins: &LibPins) -> Result<SchSymbol, IngestError> {
    let lib_id = node
        .child("lib_id")
        .and_then(|l| l.args().first())
        .and_then(SExpr::as_text)
        .ok_or_else(|| IngestError::Schematic("symbol without lib_id".into()))?
        .to_string();
    let (at, rotation) = parse_at(
        node.child("at")
            .ok_or_else(|| IngestError::Schematic(format!("symbol {lib_id} without (at ...)")))?,
    )?;
    let mirror = node
        .child("mirror")
        .and_then(|m| m.args().first())
        .and_then(SExpr::as_text)
        .and_then(|s| s.chars().next());
    let reference = node
        .children("property")
        .find(|p| p.args().first().and_then(SExpr::as_text) == Some("Reference"))
        .and_then(|p| p.args().get(1))
        .and_then(SExpr::as_text)
        .map(str::to_string)
        .ok_or(IngestError::MissingReference { lib_id: lib_id.clone() })?;
    let offsets = lib_pins.get(&lib_id).cloned().unwrap_or_default();
    if offsets.is_empty() {
        return Err(IngestError::SymbolWithoutPins {
            reference: reference.clone(),
            lib_id,
        });
    }
    let pins = offsets
        .into_iter()
        .map(|(number, offset)| {
            Ok(SchPin {
                number,
                position: place_pin(at, rotation, mirror, offset)?,
            })
        })
        .collect::<Result<Vec<_>, IngestError>>()?;
    Ok(SchSymbol {
        lib_id,
        reference,
        at,
        rotation,
        pins,
    })
}

/// Maps KiCad `lib_id`s to component classes and ordered port names.
///
/// Lookup tries the exact id first, then strips trailing `_suffix` segments
/// (`Device:R_US` falls back to `Device:R`). Unknown ids map to [`ComponentClass::Ic`]
/// with ports named after the pin numbers, plus a warning.
#[derive(Debug, Clone, Default)]
pub struct SymbolClassMap {
    rows: BTreeMap<String, (ComponentClass, Vec<String>)>,
}

impl SymbolClassMap {
    /// Parses the TSV format `lib_id<TAB>CLASS<TAB>port,names`; `#` starts a
    /// comment. Class names resolve through (and may be registered into) the
    /// vocabulary.
    pub fn parse_tsv(text: &str, vocab: &mut Vocabulary) -> Result<SymbolClassMap, IngestError> {
        let mut rows = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim_end();
            if content.trim().is_empty() {
                continue;
            }
            let mut cols = content.split('\t').map(str::trim).filter(|c| !c.is_empty());
            let (Some(lib_id), Some(class_name), ports, None) =
                (cols.next(), cols.next(), cols.next(), cols.next())
            else {
                return Err(IngestError::SymbolMap {
                    line,
                    message: format!("expected 2-3 tab-separated columns, got '{content}'"),
                });
            };
            let class = vocab
                .register_component_class(class_name)
                .map_err(|e| IngestError::SymbolMap {
                    line,
                    message: e.to_string(),
                })?;
            let port_names: Vec<String> = ports
                .map(|p| p.split(',').map(|s| s.trim().to_string()).collect())
                .unwrap_or_default();
            rows.insert(lib_id.to_string(), (class, port_names));
        }
        Ok(SymbolClassMap { rows })
    }

    /// The symbol map shipped with the toolchain, covering the `Device:*`
    /// and `power:*` libraries used by the bundled fixtures.
    pub fn builtin() -> SymbolClassMap {
        let mut vocab = Vocabulary::new();
        SymbolClassMap::parse_tsv(include_str!("../../data/symbol_classes.tsv"), &mut vocab)
            .expect("bundled symbol map is well-formed")
    }

    /// Adds all rows of `other`, overriding existing lib_ids.
    pub fn extend(&mut self, other: SymbolClassMap) {
        self.rows.extend(other.rows);
    }

    pub fn lookup(&self, lib_id: &str) -> Option<&(ComponentClass, Vec<String>)> {
        if let Some(row) = self.rows.get(lib_id) {
            return Some(row);
        }
        let mut id = lib_id;
        while let Some(stripped) = id.rsplit_once('_').map(|(head, _)| head) {
            if let Some(row) = self.rows.get(stripped) {
                return Some(row);
            }
            id = stripped;
        }
        None
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Result of netlist extraction: the graph plus non-fatal warnings
/// (floating pins, unknown lib_ids).
#[derive(Debug)]
pub struct NetlistResult {
    pub graph: CircuitGraph,
    pub warnings: Vec<String>,
}

fn sanitize_id(raw: &str) -> Option<String> {
    let cleaned: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '\0'
            }
        })
        .filter(|c| *c != '\0')
        .collect();
    let cleaned = cleaned.trim_start_matches('-').to_string();
    if cleaned.is_empty() {
        None
    } else {
        Some(cleaned)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Builds a circuit graph from the schematic subset.
///
/// Nets are formed by exact coordinate coincidence plus wire segments and
/// label-name equality. A net with two endpoints becomes a direct
/// connection; three or more endpoints mint a junction node. Junction
/// markers at plain corners (degree 2) do not become nodes. Pins on no net
/// and without a no-connect marker are reported as floating-pin warnings.
pub fn build_netlist(
    subset: &SchematicSubset,
    map: &SymbolClassMap,
) -> Result<NetlistResult, IngestError> {
    let mut warnings = Vec::new();
    let mut builder = CircuitGraph::builder();

    // Deterministic point set: pins, wire ends, junctions, labels, no-connects.
    let mut points: BTreeSet<Point> = BTreeSet::new();
    for symbol in &subset.symbols {
        points.extend(symbol.pins.iter().map(|p| p.position));
    }
    for (a, b) in &subset.wires {
        points.insert(*a);
        points.insert(*b);
    }
    points.extend(subset.junctions.iter().copied());
    points.extend(subset.no_connects.iter().copied());
    points.extend(subset.labels.iter().map(|(_, p)| *p));

    let index: BTreeMap<Point, usize> = points.iter().copied().zip(0..).collect();
    let mut uf = UnionFind::new(points.len());
    for (a, b) in &subset.wires {
        uf.union(index[a], index[b]);
    }
    // Equal label names merge their nets.
    let mut label_anchor: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, p) in &subset.labels {
        match label_anchor.get(name.as_str()) {
            Some(&first) => uf.union(first, index[p]),
            None => {
                label_anchor.insert(name, index[p]);
            }
        }
    }

    // Components and ports.
    let mut pin_ports: Vec<(Point, String)> = Vec::new(); // pin position -> port id
    let mut seen_refs: BTreeSet<String> = BTreeSet::new();
    for symbol in &subset.symbols {
        let id = sanitize_id(&symbol.reference).ok_or_else(|| {
            IngestError::Schematic(format!("reference '{}' is empty after sanitizing", symbol.reference))
        })?;
        if !seen_refs.insert(id.clone()) {
            return Err(IngestError::Schematic(format!(
                "duplicate reference designator '{id}'"
            )));
        }
        let (class, port_names) = match map.lookup(&symbol.lib_id) {
            Some((class, names)) => (class.clone(), names.clone()),
            None => {
                warnings.push(format!(
                    "unknown lib_id '{}' ({}); treated as IC with numbered ports",
                    symbol.lib_id, symbol.reference
                ));
                (ComponentClass::Ic, Vec::new())
            }
        };
        builder.add_component(&id, class, &symbol.reference, Some(symbol.at))?;
        for pin in &symbol.pins {
            let port_name = pin
                .number
                .parse::<usize>()
                .ok()
                .and_then(|n| port_names.get(n.wrapping_sub(1)))
                .cloned()
                .unwrap_or_else(|| pin.number.clone());
            let port_id = sanitize_id(&format!("{id}_{}", pin.number)).expect("id is non-empty");
            builder.add_port(&port_id, &id, &port_name)?;
            pin_ports.push((pin.position, port_id));
        }
    }

    // Net labels become NET_LABEL components, one per distinct name.
    let mut label_nodes: BTreeMap<String, (String, usize)> = BTreeMap::new(); // name -> (node id, point idx)
    for (name, p) in &subset.labels {
        if label_nodes.contains_key(name) {
            continue;
        }
        let base = sanitize_id(name).ok_or_else(|| {
            IngestError::Schematic(format!("label '{name}' is empty after sanitizing"))
        })?;
        let node_id = format!("lbl_{base}");
        builder.add_component(&node_id, ComponentClass::NetLabel, name, Some(*p))?;
        label_nodes.insert(name.clone(), (node_id, index[p]));
    }

    // Group endpoints (ports and labels) by net root.
    let mut nets: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (p, port_id) in &pin_ports {
        nets.entry(uf.find(index[p])).or_default().push(port_id.clone());
    }
    for (node_id, point_idx) in label_nodes.values() {
        nets.entry(uf.find(*point_idx)).or_default().push(node_id.clone());
    }
    let no_connect_roots: BTreeSet<usize> = subset
        .no_connects
        .iter()
        .map(|p| uf.find(index[p]))
        .collect();

    // Emit connections; junction nets sorted by member list for stable ids.
    let mut junction_nets: Vec<Vec<String>> = Vec::new();
    for (root, mut members) in nets {
        members.sort();
        members.dedup();
        match members.len() {
            0 => {}
            1 => {
                if !no_connect_roots.contains(&root) {
                    warnings.push(format!("floating pin: {}", members[0]));
                }
            }
            2 => builder.connect(&members[0], &members[1])?,
            _ => junction_nets.push(members),
        }
    }
    junction_nets.sort();
    for (i, members) in junction_nets.iter().enumerate() {
        let junction_id = format!("net_{i}");
        builder.add_junction(&junction_id)?;
        for member in members {
            builder.connect(member, &junction_id)?;
        }
    }

    Ok(NetlistResult {
        graph: builder.build()?,
        warnings,
    })
}

/// Convenience: parse, extract, and build in one step.
pub fn load_kicad(text: &str, map: &SymbolClassMap) -> Result<NetlistResult, IngestError> {
    let tree = super::sexpr::parse_sexpr(text)?;
    let subset = extract_schematic(&tree)?;
    build_netlist(&subset, map)
}

impl From<GraphError> for IngestError {
    fn from(e: GraphError) -> Self {
        IngestError::Graph(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NodeId;

    fn symbol(reference: &str, lib_id: &str, pins: &[(&str, Point)]) -> SchSymbol {
        SchSymbol {
            lib_id: lib_id.into(),
            reference: reference.into(),
            at: (0, 0),
            rotation: 0,
            pins: pins
                .iter()
                .map(|(n, p)| SchPin {
                    number: n.to_string(),
                    position: *p,
                })
                .collect(),
        }
    }

    #[test]
    fn title_block_only_document_is_empty_and_error_free() {
        let tree = crate::ingest::parse_sexpr(
            "(kicad_sch (version 20230121) (generator \"x\")
               (title_block (title \"empty sheet\") (date \"2024-01-01\")))",
        )
        .unwrap();
        let subset = extract_schematic(&tree).unwrap();
        assert!(subset.symbols.is_empty());
        assert!(subset.wires.is_empty());
        assert!(subset.junctions.is_empty());
        assert_eq!(subset.skipped.get("title_block"), Some(&1));
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert_eq!(result.graph.component_count(), 0);
        assert!(result.warnings.is_empty());
    }

    #[test]
    fn missing_reference_is_an_error() {
        let tree = crate::ingest::parse_sexpr(
            "(kicad_sch
               (lib_symbols (symbol \"Device:R\" (symbol \"R_1_1\"
                 (pin passive line (at 0 3.81 0) (length 1.27) (name \"~\") (number \"1\")))))
               (symbol (lib_id \"Device:R\") (at 10 10 0)))",
        )
        .unwrap();
        let err = extract_schematic(&tree).unwrap_err();
        assert!(matches!(err, IngestError::MissingReference { .. }));
    }

    #[test]
    fn coordinate_parsing_scales_and_rejects_off_grid() {
        assert_eq!(parse_coord("1.27").unwrap(), 127);
        assert_eq!(parse_coord("-3.81").unwrap(), -381);
        assert_eq!(parse_coord("50.8").unwrap(), 5080);
        assert_eq!(parse_coord("127").unwrap(), 12700);
        assert_eq!(parse_coord("0").unwrap(), 0);
        assert!(matches!(parse_coord("0.635"), Err(IngestError::OffGrid(_))));
        assert!(matches!(parse_coord("abc"), Err(IngestError::OffGrid(_))));
    }

    #[test]
    fn pin_placement_flips_and_rotates() {
        // Library pin at (0, 3.81): above the anchor on the sheet (y down).
        assert_eq!(place_pin((1000, 1000), 0, None, (0, 381)).unwrap(), (1000, 619));
        assert_eq!(place_pin((1000, 1000), 180, None, (0, 381)).unwrap(), (1000, 1381));
        assert_eq!(place_pin((1000, 1000), 90, None, (0, 381)).unwrap(), (619, 1000));
        assert_eq!(place_pin((1000, 1000), 270, None, (0, 381)).unwrap(), (1381, 1000));
        assert_eq!(place_pin((1000, 1000), 0, Some('x'), (0, 381)).unwrap(), (1000, 1381));
        assert!(place_pin((0, 0), 45, None, (0, 381)).is_err());
    }

    #[test]
    fn two_pins_joined_by_one_wire_form_one_connection() {
        let subset = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 100))]),
                symbol("C1", "Device:C", &[("1", (500, 0)), ("2", (500, 100))]),
            ],
            wires: vec![((0, 0), (500, 0))],
            no_connects: vec![(0, 100), (500, 100)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert!(result.warnings.is_empty(), "{:?}", result.warnings);
        assert_eq!(result.graph.connections().count(), 1);
        assert_eq!(result.graph.junctions().count(), 0);
    }

    #[test]
    fn three_pins_meeting_mint_a_junction() {
        let subset = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 900))]),
                symbol("C1", "Device:C", &[("1", (100, 0)), ("2", (100, 900))]),
                symbol("D1", "Device:D", &[("1", (200, 0)), ("2", (200, 900))]),
            ],
            wires: vec![
                ((0, 900), (50, 1000)),
                ((100, 900), (50, 1000)),
                ((200, 900), (50, 1000)),
            ],
            junctions: vec![(50, 1000)],
            no_connects: vec![(0, 0), (100, 0), (200, 0)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert!(result.warnings.is_empty(), "{:?}", result.warnings);
        assert_eq!(result.graph.junctions().count(), 1);
        let junction = result.graph.junctions().next().unwrap().clone();
        let degree = result
            .graph
            .connections()
            .filter(|(a, b)| *a == junction || *b == junction)
            .count();
        assert_eq!(degree, 3);
    }

    #[test]
    fn crossing_wires_without_marker_stay_unconnected() {
        // Two wires crossing mid-segment share no endpoint and no net.
        let subset = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (-100, 0)), ("2", (100, 0))]),
                symbol("C1", "Device:C", &[("1", (0, -100)), ("2", (0, 100))]),
            ],
            wires: vec![((-100, 0), (100, 0)), ((0, -100), (0, 100))],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        let r1 = NodeId::new("R1_1").unwrap();
        let c1 = NodeId::new("C1_1").unwrap();
        for (a, b) in result.graph.connections() {
            assert!(
                !((a == &r1 || b == &r1) && (a == &c1 || b == &c1)),
                "crossing wires must not connect"
            );
        }
        // R1's own pins form one net, C1's the other.
        assert_eq!(result.graph.connections().count(), 2);
    }

    #[test]
    fn corner_only_junction_marker_is_a_plain_join() {
        let subset = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 900))]),
                symbol("C1", "Device:C", &[("1", (500, 500)), ("2", (900, 900))]),
            ],
            // Corner at (0, 500) carries a junction marker but joins only 2 pins.
            wires: vec![((0, 0), (0, 500)), ((0, 500), (500, 500))],
            junctions: vec![(0, 500)],
            no_connects: vec![(0, 900), (900, 900)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert_eq!(result.graph.junctions().count(), 0);
        assert_eq!(result.graph.connections().count(), 1);
    }

    #[test]
    fn floating_pin_warns_unless_marked_no_connect() {
        let subset = SchematicSubset {
            symbols: vec![symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 100))])],
            no_connects: vec![(0, 100)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert_eq!(result.warnings.len(), 1);
        assert!(result.warnings[0].contains("floating pin: R1_1"));
    }

    #[test]
    fn unknown_lib_id_maps_to_ic_with_warning() {
        let subset = SchematicSubset {
            symbols: vec![symbol("U9", "Exotic:Thing", &[("1", (0, 0))])],
            no_connects: vec![(0, 0)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert_eq!(result.warnings.len(), 1);
        assert!(result.warnings[0].contains("unknown lib_id"));
        let u9 = NodeId::new("U9").unwrap();
        let view = result.graph.components().find(|c| c.id == &u9).unwrap();
        assert_eq!(view.class, &ComponentClass::Ic);
        let (_, port) = result.graph.ports_of(&u9).next().unwrap();
        assert_eq!(port.name, "1");
    }

    #[test]
    fn symbol_map_prefix_fallback() {
        let map = SymbolClassMap::builtin();
        let (class, _) = map.lookup("Device:R_US").unwrap();
        assert_eq!(class, &ComponentClass::Resistor);
        assert!(map.lookup("Device:Crystal").is_some());
        assert!(map.lookup("Nope:Nothing").is_none());
    }

    #[test]
    fn labels_merge_nets_by_name() {
        let subset = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 900))]),
                symbol("C1", "Device:C", &[("1", (5000, 0)), ("2", (5000, 900))]),
            ],
            wires: vec![((0, 0), (100, 0)), ((5000, 0), (4900, 0))],
            labels: vec![("SIG".into(), (100, 0)), ("SIG".into(), (4900, 0))],
            no_connects: vec![(0, 900), (5000, 900)],
            ..Default::default()
        };
        let result = build_netlist(&subset, &SymbolClassMap::builtin()).unwrap();
        assert!(result.warnings.is_empty(), "{:?}", result.warnings);
        // R1_1, C1_1 and the single lbl_SIG node form one 3-endpoint net.
        assert_eq!(result.graph.junctions().count(), 1);
        let labels: Vec<_> = result
            .graph
            .components()
            .filter(|c| c.class == &ComponentClass::NetLabel)
            .collect();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].name, "SIG");
    }

    #[test]
    fn translation_invariance_of_netlist() {
        let base = SchematicSubset {
            symbols: vec![
                symbol("R1", "Device:R", &[("1", (0, 0)), ("2", (0, 900))]),
                symbol("C1", "Device:C", &[("1", (100, 0)), ("2", (100, 900))]),
                symbol("D1", "Device:D", &[("1", (200, 0)), ("2", (200, 900))]),
            ],
            wires: vec![
                ((0, 900), (50, 1000)),
                ((100, 900), (50, 1000)),
                ((200, 900), (50, 1000)),
                ((0, 0), (100, 0)),
                ((100, 0), (200, 0)),
            ],
            junctions: vec![(50, 1000)],
            ..Default::default()
        };
        let (dx, dy) = (12_700, -2_540);
        let shifted = SchematicSubset {
            symbols: base
                .symbols
                .iter()
                .map(|s| SchSymbol {
                    at: (s.at.0 + dx, s.at.1 + dy),
                    pins: s
                        .pins
                        .iter()
                        .map(|p| SchPin {
                            number: p.number.clone(),
                            position: (p.position.0 + dx, p.position.1 + dy),
                        })
                        .collect(),
                    ..s.clone()
                })
                .collect(),
            wires: base
                .wires
                .iter()
                .map(|(a, b)| ((a.0 + dx, a.1 + dy), (b.0 + dx, b.1 + dy)))
                .collect(),
            junctions: base.junctions.iter().map(|p| (p.0 + dx, p.1 + dy)).collect(),
            ..Default::default()
        };
        let map = SymbolClassMap::builtin();
        let a = build_netlist(&base, &map).unwrap().graph;
        let b = build_netlist(&shifted, &map).unwrap().graph;
        assert_eq!(a.structure(false), b.structure(false));
    }
}
