//! Structure descriptors: short strings naming an atom structure, stored in
//! artifacts so they can be rebuilt later.

use anyhow::{anyhow, bail, Context, Result};
use topocyl::bao::{AtomStructure, AtomStructureDump};
use topocyl::rainbow::{build_atom_structure, RainbowConfig, RainbowStructure};
use topocyl::setalg::Space;
use topocyl::topology::{enumerate_topologies, FiniteTopology};

pub enum Resolved {
    Plain(AtomStructure),
    Rainbow(Box<RainbowStructure>),
}

impl Resolved {
    pub fn into_atoms(self) -> AtomStructure {
        match self {
            Resolved::Plain(s) => s,
            Resolved::Rainbow(r) => r.structure,
        }
    }
}

/// `space:N:U` (no topology), `space:N:U:discrete`, `space:N:U:indiscrete`,
/// `space:N:U:t<k>` (the `k`-th enumerated topology), `rainbow[:3]`, or
/// `file:<path>` holding an atom structure dump.
pub fn resolve(desc: &str) -> Result<Resolved> {
    let parts: Vec<&str> = desc.splitn(4, ':').collect();
    match parts.as_slice() {
        ["space", n, u, rest @ ..] => {
            let n: usize = n.parse().context("space dimension")?;
            let u: usize = u.parse().context("space base")?;
            let mut space = Space::new(n, u)?;
            if let Some(&t) = rest.first() {
                let topo = match t {
                    "discrete" => FiniteTopology::discrete(u)?,
                    "indiscrete" => FiniteTopology::indiscrete(u)?,
                    _ => {
                        let k: usize = t
                            .strip_prefix('t')
                            .and_then(|k| k.parse().ok())
                            .ok_or_else(|| anyhow!("unknown topology `{t}`"))?;
                        enumerate_topologies(u)?
                            .into_iter()
                            .nth(k)
                            .ok_or_else(|| anyhow!("no topology t{k} on {u} points"))?
                    }
                };
                space = space.with_topology(topo)?;
            }
            Ok(Resolved::Plain(AtomStructure::of_space(&space)?))
        }
        ["rainbow"] | ["rainbow", "3"] => Ok(Resolved::Rainbow(Box::new(build_atom_structure(
            &RainbowConfig::default_n3(),
        )?))),
        ["rainbow", n] => bail!("rainbow structures are built for n = 3 only, not {n}"),
        ["file", ..] => {
            let path = &desc["file:".len()..];
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let dump: AtomStructureDump =
                serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
            Ok(Resolved::Plain(AtomStructure::from_dump(&dump)?))
        }
        _ => bail!("unrecognized structure `{desc}`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_resolve() {
        assert_eq!(resolve("space:2:2").unwrap().into_atoms().atoms(), 4);
        assert_eq!(resolve("space:2:3:t0").unwrap().into_atoms().atoms(), 9);
        assert_eq!(
            resolve("space:2:2:indiscrete").unwrap().into_atoms().dim(),
            2
        );
        assert!(resolve("space:2:2:t9").is_err());
        assert!(resolve("rainbow:4").is_err());
        assert!(resolve("sphere").is_err());
    }
}
