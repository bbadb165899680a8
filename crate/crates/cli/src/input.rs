use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Args;
use prs_core::instance::format::{parse_instance, parse_rational};
use prs_core::problems::{
    encode_arborescence, encode_bicircular, encode_hardcore_exact, encode_root_connected,
    encode_sink_free, encode_sink_free_unchecked, encode_strong_orientation,
    find_sink_free_orientation, SamplerKind,
};
use prs_core::{DecodedObject, Encoded, Graph};

use crate::error::CliError;

pub const ENCODINGS: &[&str] = &[
    "sink-free",
    "arborescence",
    "root-connected",
    "bicircular",
    "hardcore",
    "strong",
];

/// What to sample or analyse: a named encoding of a graph, or a JSON instance.
#[derive(Args, Clone, Debug, Default)]
pub struct Target {
    /// One of sink-free, arborescence, root-connected, bicircular, hardcore, strong.
    #[arg(long)]
    pub encoding: Option<String>,
    /// Graph file (edge list or JSON).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// JSON instance file, used instead of an encoding.
    #[arg(long, conflicts_with_all = ["encoding", "graph"])]
    pub instance: Option<PathBuf>,
    /// Hard-core activity, as a decimal or `p/q`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Root vertex; overrides the graph file's `root:` header.
    #[arg(long)]
    pub root: Option<usize>,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn check_encoding(name: &str) -> Result<(), CliError> {
    if ENCODINGS.contains(&name) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "unknown encoding `{name}`; known encodings: {}",
            ENCODINGS.join(", ")
        )))
    }
}

impl Target {
    /// Checks the flags without reading any file.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.instance.is_some() {
            return Ok(());
        }
        let name = self
            .encoding
            .as_deref()
            .ok_or_else(|| CliError::Usage("pass --encoding with --graph, or --instance".into()))?;
        check_encoding(name)?;
        if self.graph.is_none() {
            return Err(CliError::Usage(format!("encoding `{name}` needs --graph")));
        }
        if self.lambda.is_some() && name != "hardcore" {
            return Err(CliError::Usage("--lambda only applies to the hardcore encoding".into()));
        }
        if let Some(l) = &self.lambda {
            parse_rational(l).map_err(|e| CliError::Usage(format!("bad --lambda: {e}")))?;
        }
        Ok(())
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        self.validate()?;
        if let Some(path) = &self.instance {
            let loaded = parse_instance(&read(path)?)?;
            let domains = loaded.instance.domains().to_vec();
            let encoded = Encoded {
                name: "instance",
                instance: loaded.instance,
                decoder: Arc::new(move |a| {
                    DecodedObject::Assignment(
                        a.as_slice().iter().enumerate().map(|(v, &i)| domains[v].value(i)).collect(),
                    )
                }),
                sampler: SamplerKind::Extremal,
            };
            return Ok(Loaded {
                encoded,
                graph: None,
                notes: Vec::new(),
            });
        }
        let name = self.encoding.as_deref().expect("validated");
        let path = self.graph.as_ref().expect("validated");
        let mut graph = Graph::parse(&read(path)?)?;
        if let Some(r) = self.root {
            graph = graph.with_root(r)?;
        }
        encode(name, graph, self.lambda.as_deref())
    }
}

/// An encoding ready to run, with the graph it came from and any notes about
/// adjustments made to the input.
pub struct Loaded {
    pub encoded: Encoded,
    pub graph: Option<Graph>,
    pub notes: Vec<String>,
}

/// Builds the named encoding of `graph`. Encodings that need a root use the
/// graph's root, or vertex 0.
pub fn encode(name: &str, graph: Graph, lambda: Option<&str>) -> Result<Loaded, CliError> {
    let root = graph.root().unwrap_or(0);
    let mut notes = Vec::new();
    let (encoded, graph) = match name {
        "sink-free" => sink_free(graph, &mut notes)?,
        "arborescence" => (encode_arborescence(&graph, root)?, graph),
        "root-connected" => (encode_root_connected(&graph, root)?, graph),
        "bicircular" => (encode_bicircular(&graph)?, graph),
        "strong" => (encode_strong_orientation(&graph)?, graph),
        "hardcore" => {
            let lambda = parse_rational(lambda.unwrap_or("1"))?;
            (encode_hardcore_exact(&graph, &lambda)?, graph)
        }
        other => {
            check_encoding(other)?;
            unreachable!("every known encoding is handled")
        }
    };
    Ok(Loaded {
        encoded,
        graph: Some(graph),
        notes,
    })
}

/// Sink-free orientations are reported relative to the listed edge
/// directions. If those have a sink, the edges are reoriented first; if no
/// sink-free orientation exists the encoding is built anyway, so sampling
/// runs into the iteration cap.
fn sink_free(graph: Graph, notes: &mut Vec<String>) -> Result<(Encoded, Graph), CliError> {
    match encode_sink_free(&graph) {
        Ok(e) => Ok((e, graph)),
        Err(prs_core::ProblemError::ReferenceHasSink(v)) => match find_sink_free_orientation(&graph) {
            Some(reoriented) => {
                notes.push(format!(
                    "listed orientation has a sink at vertex {v}; signs refer to edges {:?}",
                    reoriented.edges()
                ));
                Ok((encode_sink_free(&reoriented)?, reoriented))
            }
            None => {
                notes.push("graph has no sink-free orientation".into());
                Ok((encode_sink_free_unchecked(&graph)?, graph))
            }
        },
        Err(e) => Err(e.into()),
    }
}
