//! Text formats: edge lists, community files and partition files.
//!
//! Node labels are kept as written; dense ids exist only in memory.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{relocate, Graph, GraphBuilder, LabelIndex, NodeId, Weight};
use crate::partition::Partition;

/// Meaningful tokens of a line, or `None` for blank and `#` comment lines.
fn tokens(line: &str) -> Option<Vec<&str>> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return None;
    }
    Some(line.split_ascii_whitespace().collect())
}

fn lines<R: BufRead>(r: R) -> impl Iterator<Item = (usize, Result<String>)> {
    r.lines().enumerate().map(|(i, l)| (i + 1, l.map_err(Error::from)))
}

/// Parses `u v [w]` lines. Weights default to 1; duplicate edges are summed.
pub fn parse_edge_list<R: BufRead>(r: R, directed: bool) -> Result<Graph> {
    let mut b = GraphBuilder::new(directed);
    for (no, line) in lines(r) {
        let line = line?;
        let Some(t) = tokens(&line) else { continue };
        let w: Weight = match t.len() {
            2 => 1,
            3 => t[2].parse().ok().filter(|&w| w > 0).ok_or_else(|| {
                Error::load(no, format!("weight `{}` is not a positive integer", t[2]))
            })?,
            k => return Err(Error::load(no, format!("expected `u v [w]`, found {k} fields"))),
        };
        b.add_edge(t[0], t[1], w).map_err(|e| relocate(e, no))?;
    }
    Ok(b.build())
}

pub fn read_edge_list(path: &Path, directed: bool) -> Result<Graph> {
    parse_edge_list(BufReader::new(File::open(path)?), directed)
}

/// Writes `u<TAB>v` lines, appending the weight when it is not 1.
pub fn write_edge_list<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    let labels = g.labels();
    for (u, v, x) in g.edges() {
        let (u, v) = (labels.label(u), labels.label(v));
        if x == 1 {
            writeln!(w, "{u}\t{v}")?;
        } else {
            writeln!(w, "{u}\t{v}\t{x}")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A partition read from a file, with node labels in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPartition {
    pub labels: Vec<String>,
    pub partition: Partition,
}

impl LabeledPartition {
    /// Reorders the partition onto `universe`; both must name the same
    /// nodes.
    pub fn align(&self, universe: &LabelIndex) -> Result<Partition> {
        let mut cluster = vec![None; universe.len()];
        for (label, &c) in self.labels.iter().zip(self.partition.assignment()) {
            let id = universe
                .get(label)
                .ok_or_else(|| Error::Coverage(format!("node `{label}` is not in the reference set")))?;
            cluster[id as usize] = Some(c);
        }
        let mut out = Vec::with_capacity(cluster.len());
        for (id, c) in cluster.into_iter().enumerate() {
            out.push(c.ok_or_else(|| {
                Error::Coverage(format!("node `{}` is missing", universe.label(id as NodeId)))
            })?);
        }
        Ok(Partition::from_labels(&out))
    }

    pub fn universe(&self) -> LabelIndex {
        let mut idx = LabelIndex::new();
        for l in &self.labels {
            idx.intern(l);
        }
        idx
    }
}

/// Writes `label<TAB>cluster` lines in node-id order.
pub fn write_partition<W: Write>(mut w: W, labels: &LabelIndex, p: &Partition) -> Result<()> {
    for (v, &c) in p.assignment().iter().enumerate() {
        writeln!(w, "{}\t{c}", labels.label(v as NodeId))?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_partition<R: BufRead>(r: R) -> Result<LabeledPartition> {
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    let mut seen = FxHashSet::default();
    for (no, line) in lines(r) {
        let line = line?;
        let Some(t) = tokens(&line) else { continue };
        let [label, id] = t[..] else {
            return Err(Error::load(no, format!("expected `label cluster`, found {} fields", t.len())));
        };
        let id: u64 = id
            .parse()
            .map_err(|_| Error::load(no, format!("cluster id `{id}` is not a non-negative integer")))?;
        if !seen.insert(label.to_string()) {
            return Err(Error::load(no, format!("node `{label}` listed twice")));
        }
        labels.push(label.to_string());
        ids.push(id);
    }
    Ok(LabeledPartition { labels, partition: Partition::from_labels(&ids) })
}

pub fn read_partition(path: &Path) -> Result<LabeledPartition> {
    parse_partition(BufReader::new(File::open(path)?))
}

/// One community per line, members separated by whitespace.
pub fn write_communities<W: Write>(mut w: W, labels: &LabelIndex, p: &Partition) -> Result<()> {
    for members in p.clusters() {
        let line: Vec<&str> = members.iter().map(|&v| labels.label(v)).collect();
        writeln!(w, "{}", line.join("\t"))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a community file. A node may appear in several communities.
pub fn parse_communities<R: BufRead>(r: R) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for (_, line) in lines(r) {
        let line = line?;
        if let Some(t) = tokens(&line) {
            out.push(t.into_iter().map(str::to_string).collect());
        }
    }
    Ok(out)
}

pub fn read_communities(path: &Path) -> Result<Vec<Vec<String>>> {
    parse_communities(BufReader::new(File::open(path)?))
}

/// Candidate community indices of every node of `universe`.
///
/// Fails on labels outside the universe and on nodes without a community.
pub fn memberships(universe: &LabelIndex, communities: &[Vec<String>]) -> Result<Vec<Vec<u32>>> {
    let mut out = vec![Vec::new(); universe.len()];
    for (c, members) in communities.iter().enumerate() {
        for label in members {
            let v = universe
                .get(label)
                .ok_or_else(|| Error::Coverage(format!("node `{label}` is not in the reference set")))?;
            let slot: &mut Vec<u32> = &mut out[v as usize];
            if slot.last() != Some(&(c as u32)) {
                slot.push(c as u32);
            }
        }
    }
    if let Some(v) = out.iter().position(Vec::is_empty) {
        return Err(Error::Coverage(format!("node `{}` is missing", universe.label(v as NodeId))));
    }
    Ok(out)
}

/// Label of the first node listed in more than one community.
pub fn first_overlap(memberships: &[Vec<u32>], universe: &LabelIndex) -> Option<String> {
    memberships.iter().position(|m| m.len() > 1).map(|v| universe.label(v as NodeId).to_string())
}

/// Community files that form a partition, converted directly.
pub fn disjoint_partition(memberships: &[Vec<u32>]) -> Option<Partition> {
    let mut labels = Vec::with_capacity(memberships.len());
    for m in memberships {
        match m[..] {
            [c] => labels.push(c),
            _ => return None,
        }
    }
    Some(Partition::from_labels(&labels))
}

/// Creates (truncating) a buffered file writer.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_edge_list(text.as_bytes(), false)
    }

    #[test]
    fn edge_list_format() {
        let g = parse("# header\r\n10 20\r\n20\t\t30  2\n\n  # indented comment\n10 20 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_weight_total(), 6);
        let id = |l| g.labels().get(l).unwrap();
        assert_eq!(g.weight(id("10"), id("20")), 4);
        assert_eq!(g.weight(id("20"), id("30")), 2);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        for (text, line) in [
            ("a b\na\n", 2),
            ("a b\n# c\nb c 0\n", 3),
            ("a b -1\n", 1),
            ("a b 1.5\n", 1),
            ("a b 1 x\n", 1),
            ("a b\nc c\n", 2),
        ] {
            match parse(text) {
                Err(Error::Load { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_edge_list() {
        let g = parse("# nothing\n").unwrap();
        assert_eq!((g.n(), g.total_weight()), (0, 0));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse("x y 2\ny z\nz x\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        let h = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn partition_file_errors() {
        assert!(matches!(parse_partition("a\t0\na\t1\n".as_bytes()), Err(Error::Load { line: 2, .. })));
        assert!(matches!(parse_partition("a\tx\n".as_bytes()), Err(Error::Load { line: 1, .. })));
        assert!(matches!(parse_partition("a\n".as_bytes()), Err(Error::Load { line: 1, .. })));
    }

    #[test]
    fn align_reports_offending_label() {
        let file = parse_partition("b\t0\na\t1\n".as_bytes()).unwrap();
        let mut universe = LabelIndex::new();
        for l in ["a", "b", "c"] {
            universe.intern(l);
        }
        let err = file.align(&universe).unwrap_err().to_string();
        assert!(err.contains("`c`"), "{err}");
        universe = LabelIndex::new();
        universe.intern("a");
        let err = file.align(&universe).unwrap_err().to_string();
        assert!(err.contains("`b`"), "{err}");
    }

    #[test]
    fn communities_and_memberships() {
        let comms = parse_communities("# top\na b c\nc d\n\n".as_bytes()).unwrap();
        assert_eq!(comms.len(), 2);
        let mut universe = LabelIndex::new();
        for l in ["a", "b", "c", "d"] {
            universe.intern(l);
        }
        let m = memberships(&universe, &comms).unwrap();
        assert_eq!(m, vec![vec![0], vec![0], vec![0, 1], vec![1]]);
        assert_eq!(first_overlap(&m, &universe).as_deref(), Some("c"));
        assert!(disjoint_partition(&m).is_none());
        universe.intern("e");
        assert!(matches!(memberships(&universe, &comms), Err(Error::Coverage(_))));
    }

    proptest! {
        #[test]
        fn partition_file_round_trip(raw in proptest::collection::vec(0u32..8, 0..50)) {
            let p = Partition::from_labels(&raw);
            let labels = LabelIndex::numbered(raw.len());
            let mut buf = Vec::new();
            write_partition(&mut buf, &labels, &p).unwrap();
            let back = parse_partition(buf.as_slice()).unwrap();
            prop_assert_eq!(&back.partition, &p);
            prop_assert_eq!(back.align(&labels).unwrap(), p.clone());

            let mut buf = Vec::new();
            write_communities(&mut buf, &labels, &p).unwrap();
            let comms = parse_communities(buf.as_slice()).unwrap();
            let m = memberships(&labels, &comms).unwrap();
            prop_assert_eq!(disjoint_partition(&m).unwrap(), p);
        }
    }
}
