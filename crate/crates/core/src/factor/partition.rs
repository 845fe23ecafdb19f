use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordered blocks of hyperplane positions (0-based). Each block is kept
/// sorted. Text form is 1-based: `1|2,4|3,5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Partition {
        for b in &mut blocks {
            b.sort_unstable();
        }
        Partition { blocks }
    }

    pub fn empty() -> Partition {
        Partition::default()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn num_elements(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&i).is_ok())
    }

    /// Check that the blocks are nonempty, disjoint and cover 0..n.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            for &i in b {
                if i >= n {
                    return Err(Error::NotAPartition(format!("hyperplane {} does not exist", i + 1)));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::NotAPartition(format!("hyperplane {} appears twice", i + 1)));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::NotAPartition(format!("hyperplane {} is not covered", i + 1)));
        }
        Ok(())
    }

    /// Blocks sorted by their minimum element.
    pub fn canonical(&self) -> Partition {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b.first().copied());
        Partition { blocks }
    }

    /// Nonempty intersections with `members` (sorted), block order kept.
    pub fn induced(&self, members: &[usize]) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|i| members.binary_search(i).is_ok()).copied().collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Partition { blocks }
    }

    /// The induced partition of the deletion: drop `pivot`, drop its block if
    /// it empties, and renumber the positions after it.
    pub fn delete(&self, pivot: usize) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .filter(|&&i| i != pivot)
                    .map(|&i| if i > pivot { i - 1 } else { i })
                    .collect::<Vec<_>>()
            })
            .filter(|b| !b.is_empty())
            .collect();
        Partition { blocks }
    }

    /// Relabel every element through `f`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Partition {
        Partition::new(self.blocks.iter().map(|b| b.iter().map(|&i| f(i)).collect()).collect())
    }

    pub fn parse(text: &str) -> Result<Partition> {
        let t = text.trim();
        if t.is_empty() || t == "∅" || t == "-" {
            return Ok(Partition::empty());
        }
        let mut blocks = Vec::new();
        for part in t.split('|') {
            let mut block = Vec::new();
            for item in part.split(',') {
                let item = item.trim();
                let k: usize = item
                    .parse()
                    .map_err(|_| Error::NotAPartition(format!("bad hyperplane number {item:?}")))?;
                if k == 0 {
                    return Err(Error::NotAPartition("hyperplanes are numbered from 1".into()));
                }
                block.push(k - 1);
            }
            blocks.push(block);
        }
        Ok(Partition::new(blocks))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "∅");
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for (j, i) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Partition::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let p = Partition::parse("1,3|2,4").unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p.to_string(), "1,3|2,4");
        assert_eq!(Partition::parse("∅").unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "∅");
        assert!(Partition::parse("0|1").is_err());
        assert!(Partition::parse("1|a").is_err());
    }

    #[test]
    fn validation() {
        assert!(Partition::parse("1|2,3").unwrap().validate(3).is_ok());
        assert!(Partition::parse("1|1,2").unwrap().validate(3).is_err());
        assert!(Partition::parse("1|2").unwrap().validate(3).is_err());
        assert!(Partition::parse("1|2,4").unwrap().validate(3).is_err());
        assert!(Partition::new(vec![vec![0], vec![]]).validate(1).is_err());
    }

    #[test]
    fn induced_and_delete() {
        let p = Partition::parse("1|2,4|3,5").unwrap();
        assert_eq!(p.induced(&[0, 1, 3]).to_string(), "1|2,4");
        assert_eq!(p.delete(0).to_string(), "1,3|2,4");
        assert_eq!(p.delete(3).to_string(), "1|2|3,4");
        assert_eq!(Partition::parse("3|1,2").unwrap().canonical().to_string(), "1,2|3");
    }
}
