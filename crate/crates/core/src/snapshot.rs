//! Little-endian binary snapshots.
//!
//! Graph (`DHCLG1`): `u64` vertex count, then per vertex a `u32` degree
//! followed by that many `u32` neighbor ids.
//!
//! Labelling (`DHCLL1`): `u64` landmark count, `u32` landmark ids in rank
//! order, `u64` vertex count, the highway as row-major `u32` cells
//! (`0xFFFFFFFF` = unreachable), then per vertex a `u32` entry count and
//! `(u16 rank, u32 distance)` pairs, and finally the external id map as a
//! `u64` length plus `u64` ids.

use std::io::{Read, Write};

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ingest::IdMap;
use crate::labelling::{Highway, HighwayCoverLabelling, LabelEntry, Landmarks, VertexLabel};
use crate::VertexId;

pub const GRAPH_MAGIC: &[u8; 6] = b"DHCLG1";
pub const LABELLING_MAGIC: &[u8; 6] = b"DHCLL1";

fn bad(msg: impl Into<String>) -> Error {
    Error::Snapshot(msg.into())
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => bad("truncated snapshot"),
            _ => Error::Io(e),
        })?;
        Ok(buf)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.bytes()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn len(&mut self, limit: u64, what: &str) -> Result<usize> {
        let n = self.u64()?;
        if n > limit {
            return Err(bad(format!("{what} {n} exceeds {limit}")));
        }
        Ok(n as usize)
    }

    fn magic(&mut self, expected: &[u8; 6]) -> Result<()> {
        let got: [u8; 6] = self.bytes()?;
        if &got != expected {
            return Err(bad(format!("bad magic {:?}", String::from_utf8_lossy(&got))));
        }
        Ok(())
    }
}

pub fn write_graph<W: Write>(mut out: W, g: &Graph) -> Result<()> {
    out.write_all(GRAPH_MAGIC)?;
    out.write_all(&(g.vertex_count() as u64).to_le_bytes())?;
    for v in g.vertices() {
        let adj = g.adj(v);
        out.write_all(&(adj.len() as u32).to_le_bytes())?;
        for &w in adj {
            out.write_all(&w.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_graph<R: Read>(input: R) -> Result<Graph> {
    let mut r = Reader { inner: input };
    r.magic(GRAPH_MAGIC)?;
    let n = r.len(u64::from(u32::MAX), "vertex count")?;
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        let degree = r.u32()?;
        for _ in 0..degree {
            let w = r.u32()?;
            if w as usize >= n {
                return Err(bad(format!("neighbor {w} of {u} out of range")));
            }
            if u < w {
                edges.push((u, w));
            }
        }
    }
    let g = Graph::from_edges(n, edges)?;
    Ok(g)
}

pub fn write_labelling<W: Write>(mut out: W, l: &HighwayCoverLabelling, ids: &IdMap) -> Result<()> {
    let k = l.landmarks().len();
    out.write_all(LABELLING_MAGIC)?;
    out.write_all(&(k as u64).to_le_bytes())?;
    for &id in l.landmarks().ids() {
        out.write_all(&id.to_le_bytes())?;
    }
    out.write_all(&(l.vertex_count() as u64).to_le_bytes())?;
    for cell in l.highway().cells() {
        out.write_all(&cell.raw().to_le_bytes())?;
    }
    for label in l.labels() {
        out.write_all(&(label.len() as u32).to_le_bytes())?;
        for e in label.entries() {
            out.write_all(&e.rank.to_le_bytes())?;
            out.write_all(&e.dist.raw().to_le_bytes())?;
        }
    }
    out.write_all(&(ids.len() as u64).to_le_bytes())?;
    for &x in ids.external_ids() {
        out.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_labelling<R: Read>(input: R) -> Result<(HighwayCoverLabelling, IdMap)> {
    let mut r = Reader { inner: input };
    r.magic(LABELLING_MAGIC)?;
    let k = r.len(u64::from(u16::MAX) - 1, "landmark count")?;
    let mut landmark_ids = Vec::with_capacity(k);
    for _ in 0..k {
        landmark_ids.push(r.u32()?);
    }
    let n = r.len(u64::from(u32::MAX), "vertex count")?;
    let landmarks = Landmarks::new(landmark_ids, n)?;

    let mut highway = Highway::new(k);
    for i in 0..k {
        for j in 0..k {
            let d = Distance::from_raw(r.u32()?);
            if highway.get(j, i) != d && j < i {
                return Err(bad(format!("highway not symmetric at ({i}, {j})")));
            }
            highway.set(i, j, d);
        }
    }

    let mut labels = Vec::with_capacity(n);
    for v in 0..n as VertexId {
        let count = r.u32()? as usize;
        if count > k {
            return Err(bad(format!("vertex {v} has {count} entries for {k} landmarks")));
        }
        if count > 0 && landmarks.is_landmark(v) {
            return Err(bad(format!("landmark {v} carries label entries")));
        }
        let mut label = VertexLabel::default();
        for _ in 0..count {
            let rank = r.u16()?;
            let dist = Distance::from_raw(r.u32()?);
            if rank as usize >= k || !dist.is_finite() {
                return Err(bad(format!("invalid entry ({rank}, {dist}) at vertex {v}")));
            }
            if label.entries().last().is_some_and(|e| e.rank >= rank) {
                return Err(bad(format!("entries of vertex {v} not sorted by rank")));
            }
            label.push_sorted(LabelEntry { rank, dist });
        }
        labels.push(label);
    }

    let map_len = r.len(u64::from(u32::MAX), "id map length")?;
    let mut external = Vec::with_capacity(map_len);
    for _ in 0..map_len {
        external.push(r.u64()?);
    }
    let ids = if map_len == 0 { IdMap::identity(n) } else { IdMap::from_external(external)? };
    if ids.len() != n {
        return Err(bad(format!("id map covers {} of {n} vertices", ids.len())));
    }
    Ok((HighwayCoverLabelling::from_parts(landmarks, highway, labels)?, ids))
}
