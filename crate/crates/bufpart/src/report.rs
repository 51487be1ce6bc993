//! JSON emission. Floats are written with 17 significant digits so that
//! every value round-trips exactly; non-finite values become `null`.

use std::io;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::ser::Formatter;

use crate::error::Result;
use crate::graph::{BufferedPartition, Graph, VertexSet};

#[derive(Clone, Copy, Default)]
pub struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // serde_json routes NaN and ±∞ to write_null before reaching here.
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as one line of JSON followed by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Core,
    Buffer,
}

/// Per-vertex (part, role); `part == None` marks a shared buffer pool.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    ids: Vec<String>,
    slots: Vec<(Option<usize>, Role)>,
}

struct Slot<'a>(&'a (Option<usize>, Role));

impl Serialize for Slot<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Slot", 2)?;
        st.serialize_field("part_id", &self.0 .0)?;
        st.serialize_field("role", if self.0 .1 == Role::Core { "core" } else { "buffer" })?;
        st.end()
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.ids.len()))?;
        for (id, slot) in self.ids.iter().zip(&self.slots) {
            m.serialize_entry(id, &Slot(slot))?;
        }
        m.end()
    }
}

impl Assignment {
    pub fn from_partition(g: &Graph, bp: &BufferedPartition) -> Self {
        let mut slots = vec![(None, Role::Buffer); g.n()];
        for (i, (p, b)) in bp.parts.iter().zip(&bp.buffers).enumerate() {
            p.iter().for_each(|u| slots[u] = (Some(i), Role::Core));
            b.iter().for_each(|u| slots[u] = (Some(i), Role::Buffer));
        }
        Assignment { ids: g.ids().to_vec(), slots }
    }

    /// Parts with one shared, unlabelled buffer.
    pub fn from_shared(g: &Graph, parts: &[VertexSet], buffer: &VertexSet) -> Self {
        let mut slots = vec![(None, Role::Buffer); g.n()];
        for (i, p) in parts.iter().enumerate() {
            p.iter().for_each(|u| slots[u] = (Some(i), Role::Core));
        }
        buffer.iter().for_each(|u| slots[u] = (None, Role::Buffer));
        Assignment { ids: g.ids().to_vec(), slots }
    }

    /// Reads `{id: {part_id, role}}` back into a buffered partition. Every
    /// vertex must be listed with a part id.
    pub fn parse_partition(g: &Graph, value: &serde_json::Value, epsilon: f64) -> Result<BufferedPartition> {
        use crate::error::Error;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidParameter("assignment must be a JSON object".into()))?;
        let n = g.n();
        let index: std::collections::HashMap<&str, usize> = g.ids().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut k = 0;
        let mut entries = Vec::with_capacity(obj.len());
        for (id, slot) in obj {
            let u = *index
                .get(id.as_str())
                .ok_or_else(|| Error::InvalidParameter(format!("unknown vertex {id:?} in assignment")))?;
            let part = slot
                .get("part_id")
                .and_then(|p| p.as_u64())
                .ok_or_else(|| Error::InvalidParameter(format!("vertex {id:?} lacks a part_id")))? as usize;
            let role = match slot.get("role").and_then(|r| r.as_str()) {
                Some("core") => Role::Core,
                Some("buffer") => Role::Buffer,
                _ => return Err(Error::InvalidParameter(format!("vertex {id:?} has no valid role"))),
            };
            k = k.max(part + 1);
            entries.push((u, part, role));
        }
        let mut parts = vec![VertexSet::new(n); k];
        let mut buffers = vec![VertexSet::new(n); k];
        for (u, part, role) in entries {
            match role {
                Role::Core => parts[part].insert(u),
                Role::Buffer => buffers[part].insert(u),
            }
        }
        Ok(BufferedPartition { parts, buffers, epsilon })
    }
}
