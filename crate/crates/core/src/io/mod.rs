//! Text formats: the JSON diagram document, Graphviz output and soundness
//! reports as JSON lines.

use std::collections::BTreeMap;
use std::io;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::diagram::{
    validate, Diagram, Dimension, Endpoint, GeneratorKind, Node, NodeId, PhaseVector, Role, Wire,
};
use crate::error::{Result, ZxwError};
use crate::rules::SoundnessReport;

mod dot;

pub use dot::render_dot;

/// The only document version understood.
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub version: u32,
    pub dimension: usize,
    pub nodes: Vec<NodeDoc>,
    pub wires: Vec<[EndpointDoc; 2]>,
    pub inputs: Vec<EndpointDoc>,
    pub outputs: Vec<EndpointDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: String,
    #[serde(flatten)]
    pub kind: KindDoc,
}

/// A node kind and its parameters, tagged by the kind's name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum KindDoc {
    ZBox {
        phases: Vec<C64>,
        inputs: usize,
        outputs: usize,
    },
    Hadamard {},
    HadamardDagger {},
    WNode {},
    WGeneral {
        legs: usize,
        transpose: bool,
    },
    GreenSpider {
        angles: Vec<f64>,
        inputs: usize,
        outputs: usize,
    },
    LabeledBox {
        value: C64,
        inputs: usize,
        outputs: usize,
    },
    PinkSpider {
        phase: usize,
        inputs: usize,
        outputs: usize,
    },
    Dualiser {},
    Multiplier {
        weight: usize,
    },
    Triangle {},
    TriangleInverse {},
    VBox {},
    Scalar {
        value: C64,
    },
}

impl From<&GeneratorKind> for KindDoc {
    fn from(k: &GeneratorKind) -> Self {
        use GeneratorKind as G;
        match k.clone() {
            G::ZBox {
                phases,
                inputs,
                outputs,
            } => KindDoc::ZBox {
                phases: phases.entries().to_vec(),
                inputs,
                outputs,
            },
            G::Hadamard => KindDoc::Hadamard {},
            G::HadamardDagger => KindDoc::HadamardDagger {},
            G::WNode => KindDoc::WNode {},
            G::WGeneral { legs, transpose } => KindDoc::WGeneral { legs, transpose },
            G::GreenSpider {
                angles,
                inputs,
                outputs,
            } => KindDoc::GreenSpider {
                angles,
                inputs,
                outputs,
            },
            G::LabeledBox {
                value,
                inputs,
                outputs,
            } => KindDoc::LabeledBox {
                value,
                inputs,
                outputs,
            },
            G::PinkSpider {
                phase,
                inputs,
                outputs,
            } => KindDoc::PinkSpider {
                phase,
                inputs,
                outputs,
            },
            G::Dualiser => KindDoc::Dualiser {},
            G::Multiplier { weight } => KindDoc::Multiplier { weight },
            G::Triangle => KindDoc::Triangle {},
            G::TriangleInverse => KindDoc::TriangleInverse {},
            G::VBox => KindDoc::VBox {},
            G::Scalar { value } => KindDoc::Scalar { value },
        }
    }
}

impl From<KindDoc> for GeneratorKind {
    fn from(k: KindDoc) -> Self {
        use GeneratorKind as G;
        match k {
            KindDoc::ZBox {
                phases,
                inputs,
                outputs,
            } => G::ZBox {
                phases: PhaseVector::new(phases),
                inputs,
                outputs,
            },
            KindDoc::Hadamard {} => G::Hadamard,
            KindDoc::HadamardDagger {} => G::HadamardDagger,
            KindDoc::WNode {} => G::WNode,
            KindDoc::WGeneral { legs, transpose } => G::WGeneral { legs, transpose },
            KindDoc::GreenSpider {
                angles,
                inputs,
                outputs,
            } => G::GreenSpider {
                angles,
                inputs,
                outputs,
            },
            KindDoc::LabeledBox {
                value,
                inputs,
                outputs,
            } => G::LabeledBox {
                value,
                inputs,
                outputs,
            },
            KindDoc::PinkSpider {
                phase,
                inputs,
                outputs,
            } => G::PinkSpider {
                phase,
                inputs,
                outputs,
            },
            KindDoc::Dualiser {} => G::Dualiser,
            KindDoc::Multiplier { weight } => G::Multiplier { weight },
            KindDoc::Triangle {} => G::Triangle,
            KindDoc::TriangleInverse {} => G::TriangleInverse,
            KindDoc::VBox {} => G::VBox,
            KindDoc::Scalar { value } => G::Scalar { value },
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleDoc {
    In,
    Out,
}

/// `node` is a node id such as `"n3"`, or `"boundary"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointDoc {
    pub node: String,
    pub role: RoleDoc,
    pub port: usize,
}

const BOUNDARY: &str = "boundary";

fn role_doc(r: Role) -> RoleDoc {
    match r {
        Role::In => RoleDoc::In,
        Role::Out => RoleDoc::Out,
    }
}

fn role(r: RoleDoc) -> Role {
    match r {
        RoleDoc::In => Role::In,
        RoleDoc::Out => Role::Out,
    }
}

impl From<Endpoint> for EndpointDoc {
    fn from(e: Endpoint) -> Self {
        match e {
            Endpoint::Boundary { role, pos } => EndpointDoc {
                node: BOUNDARY.into(),
                role: role_doc(role),
                port: pos,
            },
            Endpoint::Port { node, role, port } => EndpointDoc {
                node: node.to_string(),
                role: role_doc(role),
                port,
            },
        }
    }
}

fn node_id(s: &str) -> Result<NodeId> {
    s.strip_prefix('n')
        .and_then(|k| k.parse::<u32>().ok())
        .map(NodeId)
        .ok_or_else(|| {
            ZxwError::Parse(format!(
                "bad node id {s:?}, expected n<number> or \"boundary\""
            ))
        })
}

impl EndpointDoc {
    fn endpoint(&self) -> Result<Endpoint> {
        if self.node == BOUNDARY {
            return Ok(Endpoint::Boundary {
                role: role(self.role),
                pos: self.port,
            });
        }
        Ok(Endpoint::Port {
            node: node_id(&self.node)?,
            role: role(self.role),
            port: self.port,
        })
    }
}

impl DiagramDocument {
    pub fn from_diagram(diagram: &Diagram) -> Self {
        DiagramDocument {
            version: VERSION,
            dimension: diagram.dim().get(),
            nodes: diagram
                .nodes()
                .iter()
                .map(|(id, n)| NodeDoc {
                    id: id.to_string(),
                    kind: KindDoc::from(&n.kind),
                })
                .collect(),
            wires: diagram
                .wires()
                .iter()
                .map(|w| [w.ends().0.into(), w.ends().1.into()])
                .collect(),
            inputs: (0..diagram.inputs())
                .map(|k| Endpoint::input(k).into())
                .collect(),
            outputs: (0..diagram.outputs())
                .map(|k| Endpoint::output(k).into())
                .collect(),
        }
    }

    /// Build and validate the diagram.
    pub fn to_diagram(&self) -> Result<Diagram> {
        if self.version != VERSION {
            return Err(ZxwError::Parse(format!(
                "version {} is not supported, expected {VERSION}",
                self.version
            )));
        }
        let d = Dimension::new(self.dimension)?;
        let mut nodes = BTreeMap::new();
        for (k, n) in self.nodes.iter().enumerate() {
            let id = node_id(&n.id).map_err(|e| ZxwError::Parse(format!("nodes[{k}].id: {e}")))?;
            if nodes
                .insert(
                    id,
                    Node {
                        kind: n.kind.clone().into(),
                        dim: d,
                    },
                )
                .is_some()
            {
                return Err(ZxwError::Parse(format!(
                    "nodes[{k}].id: duplicate id {}",
                    n.id
                )));
            }
        }
        let boundary = |list: &[EndpointDoc], r: RoleDoc, field: &str| -> Result<usize> {
            for (k, e) in list.iter().enumerate() {
                if e.node != BOUNDARY || e.role != r || e.port != k {
                    return Err(ZxwError::Parse(format!(
                        "{field}[{k}] must be {{\"node\": \"boundary\", \"role\": \"{}\", \"port\": {k}}}",
                        if r == RoleDoc::In { "in" } else { "out" }
                    )));
                }
            }
            Ok(list.len())
        };
        let inputs = boundary(&self.inputs, RoleDoc::In, "inputs")?;
        let outputs = boundary(&self.outputs, RoleDoc::Out, "outputs")?;
        let mut wires = Vec::with_capacity(self.wires.len());
        for (k, [a, b]) in self.wires.iter().enumerate() {
            let at = |e: &EndpointDoc| {
                e.endpoint()
                    .map_err(|err| ZxwError::Parse(format!("wires[{k}]: {err}")))
            };
            wires.push(Wire::new(at(a)?, at(b)?));
        }
        if wires.len()
            != wires
                .iter()
                .collect::<std::collections::BTreeSet<_>>()
                .len()
        {
            return Err(ZxwError::Parse(
                "wires: the same wire is listed twice".into(),
            ));
        }
        let diagram = Diagram::from_parts(d, nodes, wires, inputs, outputs);
        let problems = validate(&diagram);
        if !problems.is_empty() {
            return Err(ZxwError::IllFormed(problems));
        }
        Ok(diagram)
    }
}

/// Parse a diagram document. Syntax errors carry their line and column.
pub fn parse(text: &str) -> Result<Diagram> {
    let doc: DiagramDocument =
        serde_json::from_str(text).map_err(|e| ZxwError::Parse(e.to_string()))?;
    doc.to_diagram()
}

/// Writes every float with 17 significant digits.
struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Canonical text of `diagram`: nodes by id, wires in sorted order, floats
/// with 17 significant digits, one line per node and wire.
pub fn serialize(diagram: &Diagram) -> String {
    let doc = DiagramDocument::from_diagram(diagram);
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"version\": {},\n", doc.version));
    out.push_str(&format!("  \"dimension\": {},\n", doc.dimension));
    out.push_str(&list("nodes", doc.nodes.iter().map(compact)));
    out.push_str(",\n");
    out.push_str(&list("wires", doc.wires.iter().map(compact)));
    out.push_str(",\n");
    out.push_str(&list("inputs", doc.inputs.iter().map(compact)));
    out.push_str(",\n");
    out.push_str(&list("outputs", doc.outputs.iter().map(compact)));
    out.push_str("\n}\n");
    out
}

fn list(name: &str, items: impl Iterator<Item = String>) -> String {
    let items: Vec<String> = items.map(|s| format!("    {s}")).collect();
    if items.is_empty() {
        format!("  \"{name}\": []")
    } else {
        format!("  \"{name}\": [\n{}\n  ]", items.join(",\n"))
    }
}

fn compact<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value
        .serialize(&mut ser)
        .expect("document values serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// One JSON record per line.
pub fn write_report(reports: &[SoundnessReport]) -> String {
    reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("reports serialize") + "\n")
        .collect()
}

pub fn read_report(text: &str) -> Result<Vec<SoundnessReport>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            serde_json::from_str(l).map_err(|e| ZxwError::Parse(format!("line {}: {e}", k + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn hadamard_document() {
        let text = r#"{
            "version": 1, "dimension": 3,
            "nodes": [{"id": "n0", "kind": "hadamard", "params": {}}],
            "wires": [
                [{"node": "boundary", "role": "in", "port": 0}, {"node": "n0", "role": "in", "port": 0}],
                [{"node": "n0", "role": "out", "port": 0}, {"node": "boundary", "role": "out", "port": 0}]
            ],
            "inputs": [{"node": "boundary", "role": "in", "port": 0}],
            "outputs": [{"node": "boundary", "role": "out", "port": 0}]
        }"#;
        let g = parse(text).unwrap();
        assert_eq!((g.inputs(), g.outputs()), (1, 1));
        assert_eq!(
            g,
            Diagram::generator(GeneratorKind::Hadamard, dim(3)).unwrap()
        );
    }

    #[test]
    fn unknown_kind_is_named() {
        let text = r#"{"version": 1, "dimension": 2,
            "nodes": [{"id": "n0", "kind": "teleporter", "params": {}}],
            "wires": [], "inputs": [], "outputs": []}"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("teleporter"), "{err}");
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let d = dim(3);
        let a = PhaseVector::new(vec![C64::new(0.1, -2.5), C64::new(1.0 / 3.0, 0.0)]);
        let g = Diagram::generator(GeneratorKind::z_box(a, 1, 2), d)
            .unwrap()
            .then(
                &Diagram::generator(GeneratorKind::WNode, d)
                    .unwrap()
                    .tensor(&Diagram::identity(d, 1))
                    .unwrap(),
            )
            .unwrap();
        let text = serialize(&g);
        let back = parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn wrong_version_rejected() {
        let text = serialize(&Diagram::empty(dim(2))).replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(parse(&text), Err(ZxwError::Parse(_))));
    }

    #[test]
    fn ill_formed_document_reports_violations() {
        let text = r#"{"version": 1, "dimension": 2,
            "nodes": [{"id": "n0", "kind": "hadamard", "params": {}}],
            "wires": [], "inputs": [], "outputs": []}"#;
        assert!(matches!(parse(text), Err(ZxwError::IllFormed(_))));
    }

    #[test]
    fn reports_round_trip() {
        let reports = vec![
            SoundnessReport {
                rule: "S1".into(),
                d: 3,
                samples: 20,
                max_dev: Some(1.234e-15),
                pass: true,
                error: None,
            },
            SoundnessReport {
                rule: "X".into(),
                d: 2,
                samples: 1,
                max_dev: None,
                pass: false,
                error: Some("no".into()),
            },
        ];
        assert_eq!(read_report(&write_report(&reports)).unwrap(), reports);
    }
}
