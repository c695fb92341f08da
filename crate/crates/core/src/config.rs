//! 0/1 fields over the vertices of a [`FiniteGraph`].

use crate::error::{Error, Result};
use crate::lattice::{FiniteGraph, LatticeKind};

/// Identifies the box a configuration was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GraphTag {
    pub kind: LatticeKind,
    pub side: usize,
}

impl GraphTag {
    pub fn of(graph: &FiniteGraph) -> Self {
        GraphTag {
            kind: graph.kind(),
            side: graph.side(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    bits: Vec<bool>,
    tag: GraphTag,
}

impl Config {
    pub fn vacant(graph: &FiniteGraph) -> Self {
        Config {
            bits: vec![false; graph.vertex_count()],
            tag: GraphTag::of(graph),
        }
    }

    pub fn occupied(graph: &FiniteGraph) -> Self {
        Config {
            bits: vec![true; graph.vertex_count()],
            tag: GraphTag::of(graph),
        }
    }

    pub fn from_bits(graph: &FiniteGraph, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != graph.vertex_count() {
            return Err(Error::GraphMismatch);
        }
        Ok(Config {
            bits,
            tag: GraphTag::of(graph),
        })
    }

    pub fn from_fn(graph: &FiniteGraph, f: impl FnMut(usize) -> bool) -> Self {
        Config {
            bits: (0..graph.vertex_count()).map(f).collect(),
            tag: GraphTag::of(graph),
        }
    }

    /// Bit `i` of `mask` is vertex `i`. Only for boxes of at most 64 vertices.
    pub fn from_mask(graph: &FiniteGraph, mask: u64) -> Self {
        debug_assert!(graph.vertex_count() <= 64);
        Config::from_fn(graph, |v| (mask >> v) & 1 == 1)
    }

    pub fn tag(&self) -> GraphTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn set(&mut self, v: usize, value: bool) {
        self.bits[v] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn count_occupied(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn occupied_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn check_graph(&self, graph: &FiniteGraph) -> Result<()> {
        if self.tag == GraphTag::of(graph) && self.bits.len() == graph.vertex_count() {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    fn zip_with(&self, other: &Config, f: impl Fn(bool, bool) -> bool) -> Result<Config> {
        if self.tag != other.tag {
            return Err(Error::GraphMismatch);
        }
        Ok(Config {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            tag: self.tag,
        })
    }

    pub fn or(&self, other: &Config) -> Result<Config> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn and(&self, other: &Config) -> Result<Config> {
        self.zip_with(other, |a, b| a & b)
    }

    /// `self AND NOT other`.
    pub fn and_not(&self, other: &Config) -> Result<Config> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Config {
        Config {
            bits: self.bits.iter().map(|&b| !b).collect(),
            tag: self.tag,
        }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Config) -> Result<bool> {
        if self.tag != other.tag {
            return Err(Error::GraphMismatch);
        }
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a | b))
    }
}
