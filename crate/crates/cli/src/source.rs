//! Where a sweep's graph comes from: an edge-list file, the cached Epinions
//! dataset, a generated BA graph or a constructed theorem instance.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use robustnet::generate::{generate_ba, BaSpec};
use robustnet::ingest::{load_snap_edgelist, SnapGraph};
use robustnet::rng::{derive_seed, rng_from_seed, substream};
use robustnet::theorem::{build_theorem_instance, TheoremInstanceSpec};
use robustnet::Graph;

use crate::error::{CliError, Result};

/// Directory holding downloaded datasets. Defaults to `./data`.
pub const DATA_DIR_ENV: &str = "ROBUSTNET_DATA";
pub const EPINIONS_FILE: &str = "soc-Epinions1.txt";
pub const EPINIONS_URL: &str = "https://snap.stanford.edu/data/soc-Epinions1.txt.gz";

const GRAPH_SEED_TAG: u64 = 0x0067_7261_7068; // "graph"

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Epinions,
    Ba(BaSpec),
    Theorem(TheoremInstanceSpec),
}

impl GraphSource {
    /// `epinions` or a path.
    pub fn from_graph_arg(arg: &str) -> GraphSource {
        if arg.eq_ignore_ascii_case("epinions") {
            GraphSource::Epinions
        } else {
            GraphSource::File(PathBuf::from(arg))
        }
    }

    /// `n,m,seed_size`
    pub fn parse_ba(arg: &str) -> Result<GraphSource> {
        let v: Vec<usize> = parse_numbers(arg, "--ba n,m,seed_size")?;
        let [n, m_attach, seed_size] = v[..] else {
            return Err(CliError::usage(format!(
                "--ba expects n,m,seed_size, got {arg:?}"
            )));
        };
        let spec = BaSpec {
            n,
            m_attach,
            seed_size,
        };
        spec.validate()?;
        Ok(GraphSource::Ba(spec))
    }

    /// `C,a,b,alpha,beta,gamma,n`
    pub fn parse_theorem(arg: &str) -> Result<GraphSource> {
        Ok(GraphSource::Theorem(parse_theorem_spec(arg)?))
    }

    /// Short stable label written into the CSV `graph` column.
    pub fn label(&self) -> String {
        match self {
            GraphSource::File(p) => format!(
                "file:{}",
                p.file_name()
                    .map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into())
            ),
            GraphSource::Epinions => "epinions".into(),
            GraphSource::Ba(s) => format!("ba:{},{},{}", s.n, s.m_attach, s.seed_size),
            GraphSource::Theorem(s) => format!(
                "theorem:{},{},{},{},{},{},{}",
                s.c, s.a, s.b, s.alpha, s.beta, s.gamma, s.n
            ),
        }
    }

    /// Loads or builds the graph. Generated graphs are seeded from `base_seed`.
    pub fn resolve(&self, base_seed: u64) -> Result<Graph> {
        let seed = derive_seed(base_seed, &[GRAPH_SEED_TAG]);
        match self {
            GraphSource::File(p) => Ok(load_edgelist_file(p)?.graph),
            GraphSource::Epinions => Ok(load_edgelist_file(&epinions_path()?)?.graph),
            GraphSource::Ba(spec) => Ok(generate_ba(*spec, &mut rng_from_seed(seed))?),
            GraphSource::Theorem(spec) => {
                Ok(build_theorem_instance(*spec, &mut substream(seed, 0))?.graph)
            }
        }
    }
}

pub fn parse_theorem_spec(arg: &str) -> Result<TheoremInstanceSpec> {
    let v: Vec<f64> = parse_numbers(arg, "--theorem C,a,b,alpha,beta,gamma,n")?;
    let [c, a, b, alpha, beta, gamma, n] = v[..] else {
        return Err(CliError::usage(format!(
            "--theorem expects C,a,b,alpha,beta,gamma,n, got {arg:?}"
        )));
    };
    if n.fract() != 0.0 || n < 0.0 {
        return Err(CliError::usage(format!(
            "theorem n = {n} is not a node count"
        )));
    }
    let spec = TheoremInstanceSpec {
        n: n as usize,
        c,
        a,
        b,
        alpha,
        beta,
        gamma,
    };
    spec.layout()?;
    Ok(spec)
}

fn parse_numbers<T: std::str::FromStr>(arg: &str, what: &str) -> Result<Vec<T>> {
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("{what}: cannot parse {s:?}")))
        })
        .collect()
}

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

/// `soc-Epinions1.txt` or `soc-Epinions1.txt.gz` in the data directory.
pub fn epinions_path() -> Result<PathBuf> {
    let dir = data_dir();
    let plain = dir.join(EPINIONS_FILE);
    let gz = dir.join(format!("{EPINIONS_FILE}.gz"));
    [plain, gz]
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| {
            CliError::MissingDataset(format!(
                "{} (set {DATA_DIR_ENV} or fetch {EPINIONS_URL} with scripts/fetch_epinions.sh)",
                dir.join(EPINIONS_FILE).display()
            ))
        })
}

/// Reads a SNAP edge list, transparently gunzipping `*.gz`.
pub fn load_edgelist_file(path: &Path) -> Result<SnapGraph> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let reader: Box<dyn BufRead> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(BufReader::new(GzDecoder::new(file)))
    } else {
        Box::new(BufReader::new(file))
    };
    load_snap_edgelist(reader).map_err(|e| match e {
        robustnet::Error::Io(source) => CliError::io(path, source),
        other => other.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!(
            GraphSource::parse_ba("100, 2,3").unwrap(),
            GraphSource::Ba(BaSpec {
                n: 100,
                m_attach: 2,
                seed_size: 3
            })
        );
        assert!(GraphSource::parse_ba("100,2").is_err());
        let GraphSource::Theorem(t) =
            GraphSource::parse_theorem("1,0.2,0.6,0.5,1,1,10000").unwrap()
        else {
            panic!()
        };
        assert_eq!((t.n, t.b, t.gamma), (10_000, 0.6, 1.0));
        // infeasible band
        assert!(GraphSource::parse_theorem("1,0.2,0.4,0.5,1,1,10000").is_err());
        assert!(GraphSource::parse_theorem("1,0.2,0.6,0.5,1,1,10000.5").is_err());
    }

    #[test]
    fn labels_are_path_independent() {
        assert_eq!(
            GraphSource::from_graph_arg("/tmp/x/g.txt").label(),
            "file:g.txt"
        );
        assert_eq!(
            GraphSource::from_graph_arg("Epinions"),
            GraphSource::Epinions
        );
    }

    #[test]
    fn generated_graphs_follow_the_seed() {
        let src = GraphSource::parse_ba("500,2,3").unwrap();
        assert_eq!(src.resolve(1).unwrap(), src.resolve(1).unwrap());
        assert_ne!(src.resolve(1).unwrap(), src.resolve(2).unwrap());
    }
}
