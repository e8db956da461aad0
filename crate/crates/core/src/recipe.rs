//! Declarative construction recipes, as accepted by `zccs construct recipe`.
//!
//! A recipe is a JSON object tagged by `kind`. Matrix inputs are either
//! nested recipes, inline documents, inline BH grids, or strings naming a
//! catalog BH matrix or a document file.
//!
//! ```json
//! {"kind": "extend", "um": "F3", "seed": {"kind": "seed", "um": "F3", "uk": "BH63"}}
//! ```

use serde::{Deserialize, Serialize};

use crate::bh::{BhGrid, BhMatrix};
use crate::constructions::{
    extend_zcz, pu_recursive, seed_zpu, unifying_construct, zpu_kron, zpu_product, PuRecipe,
    UnifyingMode,
};
use crate::correlation::zcz_width;
use crate::error::{Error, Result};
use crate::io::CodeSetDocument;
use crate::polymat::PolyMatrix;

/// A BH matrix given by catalog name (or document path) or inline grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BhSpec {
    Name(String),
    Grid(BhGrid),
}

/// A matrix input to a recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Recipe(Box<Recipe>),
    Document(CodeSetDocument),
    Grid(BhGrid),
    /// A catalog BH name, a document path, or `-` for standard input.
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    Seed {
        um: BhSpec,
        uk: BhSpec,
    },
    Extend {
        um: BhSpec,
        seed: Source,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        repeat: Option<usize>,
    },
    Unifying {
        g0: Source,
        g1: Source,
        mode: UnifyingMode,
    },
    PuRecursive {
        /// Stage matrix used for every stage, together with `n`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<BhSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        /// Explicit per-stage matrices; replaces `a` and `n`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stages: Option<Vec<BhSpec>>,
        u0: BhSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pi: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        row_perms: Option<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        col_perms: Option<Vec<Vec<usize>>>,
    },
    Product {
        x: Source,
        y: Source,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<usize>,
    },
    Kron {
        x: Source,
        y: Source,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        z: Option<usize>,
    },
    Conjugate {
        x: Source,
    },
}

/// A constructed matrix with the zone width its construction guarantees.
#[derive(Debug, Clone)]
pub struct Constructed {
    pub matrix: PolyMatrix,
    pub claimed_z: Option<usize>,
}

/// Reads documents named by path (or `-`).
pub trait Loader {
    fn load(&mut self, name: &str) -> Result<String>;
}

impl<F: FnMut(&str) -> Result<String>> Loader for F {
    fn load(&mut self, name: &str) -> Result<String> {
        self(name)
    }
}

/// Loader that reads files from disk.
pub struct FileLoader;

impl Loader for FileLoader {
    fn load(&mut self, name: &str) -> Result<String> {
        std::fs::read_to_string(name)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {name}: {e}")))
    }
}

/// Resolves a BH name, falling back to a constant square document on disk.
pub fn resolve_bh(spec: &BhSpec, loader: &mut dyn Loader) -> Result<BhMatrix> {
    match spec {
        BhSpec::Grid(g) => BhMatrix::from_grid(g),
        BhSpec::Name(name) => match BhMatrix::by_name(name) {
            Err(unknown @ Error::UnknownBh { .. }) => {
                let Ok(text) = loader.load(name) else {
                    return Err(unknown);
                };
                let doc = CodeSetDocument::parse(&text)?;
                if doc.l != 1 || doc.m != doc.k {
                    return Err(Error::NotBh(format!(
                        "{name} is a {}x{} document of length {}, not a square constant matrix",
                        doc.m, doc.k, doc.l
                    )));
                }
                let grid = doc.to_grid()?;
                let exps = (0..doc.m)
                    .flat_map(|r| (0..doc.k).map(move |c| (r, c)))
                    .map(|(r, c)| grid.get(r, c, 0))
                    .collect();
                BhMatrix::new(doc.q, doc.m, exps)
            }
            other => other,
        },
    }
}

/// Resolves a matrix source, returning its claimed zone width when known.
pub fn resolve_source(source: &Source, loader: &mut dyn Loader) -> Result<Constructed> {
    match source {
        Source::Recipe(r) => evaluate(r, loader),
        Source::Document(doc) => {
            doc.validate()?;
            Ok(Constructed {
                matrix: doc.to_matrix()?,
                claimed_z: doc.metadata.claimed_z,
            })
        }
        Source::Grid(g) => {
            let u = BhMatrix::from_grid(g)?;
            Ok(Constructed {
                matrix: u.to_polymatrix(),
                claimed_z: Some(1),
            })
        }
        Source::Name(name) => match BhMatrix::by_name(name) {
            Ok(u) => Ok(Constructed {
                matrix: u.to_polymatrix(),
                claimed_z: Some(1),
            }),
            Err(unknown) => {
                let text = loader.load(name).map_err(|_| unknown)?;
                let doc = CodeSetDocument::parse(&text)?;
                Ok(Constructed {
                    matrix: doc.to_matrix()?,
                    claimed_z: doc.metadata.claimed_z,
                })
            }
        },
    }
}

/// Zone width to use for an input: its claim, or the achieved width.
fn width_of(c: &Constructed, explicit: Option<usize>) -> Result<usize> {
    if let Some(z) = explicit.or(c.claimed_z) {
        return Ok(z);
    }
    match zcz_width(&c.matrix)? {
        0 => Err(Error::Precondition(
            "input has no zero correlation zone".into(),
        )),
        z => Ok(z),
    }
}

pub fn evaluate(recipe: &Recipe, loader: &mut dyn Loader) -> Result<Constructed> {
    match recipe {
        Recipe::Seed { um, uk } => {
            let um = resolve_bh(um, loader)?;
            let uk = resolve_bh(uk, loader)?;
            Ok(Constructed {
                matrix: seed_zpu(&um, &uk)?,
                claimed_z: Some(um.order()),
            })
        }
        Recipe::Extend {
            um,
            seed,
            z,
            repeat,
        } => {
            let um = resolve_bh(um, loader)?;
            let input = resolve_source(seed, loader)?;
            let mut z = width_of(&input, *z)?;
            let mut g = input.matrix;
            for _ in 0..repeat.unwrap_or(1) {
                g = extend_zcz(&um, &g, z)?;
                z *= um.order();
            }
            Ok(Constructed {
                matrix: g,
                claimed_z: Some(z),
            })
        }
        Recipe::Unifying { g0, g1, mode } => {
            let g0 = resolve_source(g0, loader)?.matrix;
            let g1 = resolve_source(g1, loader)?.matrix;
            Ok(Constructed {
                claimed_z: Some(g1.rows()),
                matrix: unifying_construct(&g0, &g1, *mode)?,
            })
        }
        Recipe::PuRecursive {
            a,
            n,
            stages,
            u0,
            pi,
            row_perms,
            col_perms,
        } => {
            let u0 = resolve_bh(u0, loader)?;
            let stages = match (stages, a) {
                (Some(s), None) if n.is_none() => s
                    .iter()
                    .map(|b| resolve_bh(b, loader))
                    .collect::<Result<Vec<_>>>()?,
                (None, Some(a)) => vec![resolve_bh(a, loader)?; n.unwrap_or(1)],
                _ => {
                    return Err(Error::InvalidArgument(
                        "pu-recursive needs either `a` (with optional `n`) or `stages`".into(),
                    ))
                }
            };
            let p = stages.first().map_or(u0.order(), BhMatrix::order);
            let recipe = PuRecipe {
                p,
                stages,
                u0,
                pi: pi.clone(),
                row_perms: row_perms.clone(),
                col_perms: col_perms.clone(),
            };
            let matrix = pu_recursive(&recipe)?;
            Ok(Constructed {
                claimed_z: Some(p.pow(recipe.stages.len() as u32)),
                matrix,
            })
        }
        Recipe::Product { x, y, z } => {
            let x = resolve_source(x, loader)?;
            let y = resolve_source(y, loader)?;
            let z = width_of(&y, *z)?;
            Ok(Constructed {
                matrix: zpu_product(&x.matrix, &y.matrix, z)?,
                claimed_z: Some(z),
            })
        }
        Recipe::Kron { x, y, z } => {
            let x = resolve_source(x, loader)?;
            let y = resolve_source(y, loader)?;
            let z = width_of(&x, *z)?;
            Ok(Constructed {
                matrix: zpu_kron(&x.matrix, &y.matrix, z)?,
                claimed_z: Some(z),
            })
        }
        Recipe::Conjugate { x } => {
            let x = resolve_source(x, loader)?;
            Ok(Constructed {
                matrix: x.matrix.conjugate(),
                claimed_z: x.claimed_z,
            })
        }
    }
}
