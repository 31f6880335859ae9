//! JSON file formats for instances and allocations.
//!
//! Files use 1-indexed agents and items, matching the human-facing
//! output; the conversion to the library's 0-indexed model happens here
//! at the boundary. Utilities are bare integers when whole, otherwise
//! strings "p/q" reduced to lowest terms, so nothing is ever rounded.

use std::fs;
use std::io::Read;

use anyhow::{bail, Context, Result};
use fairdiv::{rat, Allocation, Bundle, Instance, Rational};
use num::bigint::BigInt;
use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// One utility entry as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FileRational {
    Whole(i64),
    Fraction(String),
}

pub fn encode_rational(value: &Rational) -> FileRational {
    if value.denom().is_one() {
        return match value.numer().to_i64() {
            Some(whole) => FileRational::Whole(whole),
            None => FileRational::Fraction(value.numer().to_string()),
        };
    }
    FileRational::Fraction(format!("{}/{}", value.numer(), value.denom()))
}

/// Accepts "p/q" or a bare integer string; the result is reduced.
pub fn decode_rational(entry: &FileRational) -> Result<Rational> {
    let text = match entry {
        FileRational::Whole(whole) => return Ok(rat(*whole)),
        FileRational::Fraction(text) => text,
    };
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p
        .parse()
        .ok()
        .with_context(|| format!("bad numerator in '{text}'"))?;
    let q: BigInt = q
        .parse()
        .ok()
        .with_context(|| format!("bad denominator in '{text}'"))?;
    if q.is_zero() {
        bail!("zero denominator in '{text}'");
    }
    Ok(Rational::new(p, q))
}

/// Display names. Purely cosmetic; lengths must match the instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Names {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub agents: usize,
    pub items: usize,
    pub utilities: Vec<Vec<FileRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Names>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, names: Option<Names>) -> InstanceFile {
        InstanceFile {
            agents: inst.agents(),
            items: inst.items(),
            utilities: (0..inst.agents())
                .map(|i| inst.row(i).iter().map(encode_rational).collect())
                .collect(),
            names,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.utilities.len() != self.agents {
            bail!(
                "{} utility rows for {} agents",
                self.utilities.len(),
                self.agents
            );
        }
        let mut rows = Vec::with_capacity(self.agents);
        for (i, row) in self.utilities.iter().enumerate() {
            if row.len() != self.items {
                bail!(
                    "utility row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    self.items
                );
            }
            let row: Vec<Rational> = row
                .iter()
                .map(decode_rational)
                .collect::<Result<_>>()
                .with_context(|| format!("utility row {}", i + 1))?;
            rows.push(row);
        }
        if let Some(names) = &self.names {
            if let Some(agents) = &names.agents {
                if agents.len() != self.agents {
                    bail!("{} agent names for {} agents", agents.len(), self.agents);
                }
            }
            if let Some(items) = &names.items {
                if items.len() != self.items {
                    bail!("{} item names for {} items", items.len(), self.items);
                }
            }
        }
        Ok(Instance::new(rows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationFile {
    /// One list of 1-indexed item numbers per agent.
    pub bundles: Vec<Vec<usize>>,
    pub complete: bool,
}

impl AllocationFile {
    pub fn from_allocation(alloc: &Allocation, items: usize) -> AllocationFile {
        AllocationFile {
            bundles: alloc
                .bundles()
                .iter()
                .map(|b| b.iter().map(|item| item + 1).collect())
                .collect(),
            complete: alloc.is_complete(items),
        }
    }

    pub fn to_allocation(&self, inst: &Instance) -> Result<Allocation> {
        if self.bundles.len() != inst.agents() {
            bail!(
                "{} bundles for {} agents",
                self.bundles.len(),
                inst.agents()
            );
        }
        let mut bundles = Vec::with_capacity(self.bundles.len());
        for listed in &self.bundles {
            let mut bundle = Bundle::new();
            for &number in listed {
                if number == 0 {
                    bail!("item numbers are 1-indexed");
                }
                if number > inst.items() {
                    bail!("item {} out of range ({} items)", number, inst.items());
                }
                if !bundle.insert(number - 1) {
                    bail!("item {number} listed twice in one bundle");
                }
            }
            bundles.push(bundle);
        }
        let alloc = Allocation::new(bundles)?;
        if alloc.is_complete(inst.items()) != self.complete {
            bail!(
                "complete flag says {} but the bundles say otherwise",
                self.complete
            );
        }
        Ok(alloc)
    }
}

/// Reads a file, or stdin when the path is "-".
pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

pub fn load_instance(path: &str) -> Result<(Instance, InstanceFile)> {
    let text = read_input(path)?;
    let file: InstanceFile =
        serde_json::from_str(&text).with_context(|| format!("parsing instance {path}"))?;
    let inst = file
        .to_instance()
        .with_context(|| format!("validating instance {path}"))?;
    Ok((inst, file))
}

pub fn load_allocation(path: &str, inst: &Instance) -> Result<Allocation> {
    let text = read_input(path)?;
    let file: AllocationFile =
        serde_json::from_str(&text).with_context(|| format!("parsing allocation {path}"))?;
    file.to_allocation(inst)
        .with_context(|| format!("validating allocation {path}"))
}
