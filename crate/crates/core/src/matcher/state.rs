use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::table::MTable;
use crate::query::Variable;

/// Names the partial-result relation a table fragment belongs to.
///
/// A relation produced by a pattern with a variable object lives on the
/// vertices its rows bind that variable to, one fragment per vertex. A
/// relation produced by a pattern with a constant object lives entirely on
/// the constant's vertex and is named after the pattern's iteration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrackKey {
    Var(Variable),
    Anchor(usize),
}

impl fmt::Display for TrackKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrackKey::Var(v) => write!(f, "{v}"),
            TrackKey::Anchor(i) => write!(f, "@{i}"),
        }
    }
}

/// One Match_Track table with its end flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Track {
    pub m_t: Arc<MTable>,
    pub end_flag: bool,
}

/// Per-vertex state: the vertex id is its label, so only the tracks are
/// stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexState {
    tracks: BTreeMap<TrackKey, Track>,
}

impl VertexState {
    pub fn track(&self, key: &TrackKey) -> Option<&Track> {
        self.tracks.get(key)
    }

    /// The table of `key` if its end flag is set.
    pub fn live(&self, key: &TrackKey) -> Option<&Arc<MTable>> {
        self.tracks.get(key).filter(|t| t.end_flag).map(|t| &t.m_t)
    }

    pub fn tracks(&self) -> impl Iterator<Item = (&TrackKey, &Track)> {
        self.tracks.iter()
    }

    pub fn live_tracks(&self) -> impl Iterator<Item = (&TrackKey, &Arc<MTable>)> {
        self.tracks.iter().filter(|(_, t)| t.end_flag).map(|(k, t)| (k, &t.m_t))
    }

    /// True when the vertex ends at least one matched path.
    pub fn is_end(&self) -> bool {
        self.tracks.values().any(|t| t.end_flag)
    }

    pub(crate) fn set(&mut self, key: TrackKey, track: Track) {
        self.tracks.insert(key, track);
    }

    pub(crate) fn kill(&mut self, key: &TrackKey) {
        if let Some(t) = self.tracks.get_mut(key) {
            t.end_flag = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMessage {
    pub m_t: MTable,
    pub end_flag: bool,
}

impl VertexMessage {
    pub fn to_dst(m_t: MTable) -> Self {
        VertexMessage { m_t, end_flag: true }
    }

    pub fn to_src() -> Self {
        VertexMessage { m_t: MTable::empty(), end_flag: false }
    }
}

/// Vertical append: row-set union of the tables, OR of the flags.
///
/// Panics if both tables have rows and their schemas differ; all nonempty
/// tables sent to one track in one superstep share a schema.
pub fn merge_msg(a: VertexMessage, b: VertexMessage) -> VertexMessage {
    let m_t = a.m_t.union(b.m_t).unwrap_or_else(|e| panic!("merge_msg invariant violated: {e}"));
    VertexMessage { m_t, end_flag: a.end_flag || b.end_flag }
}

/// Keeps the old table unless the message brings a nonempty one; the flag
/// always follows the message.
pub fn join_mapper(old: Option<&Track>, msg: VertexMessage) -> Track {
    let m_t = if msg.m_t.is_empty() {
        old.map_or_else(|| Arc::new(MTable::empty()), |t| Arc::clone(&t.m_t))
    } else {
        Arc::new(msg.m_t)
    };
    Track { m_t, end_flag: msg.end_flag }
}

/// Everything a vertex receives in one superstep, merged per track.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Inbox(pub BTreeMap<TrackKey, VertexMessage>);

impl Inbox {
    pub fn single(key: TrackKey, msg: VertexMessage) -> Self {
        Inbox(BTreeMap::from([(key, msg)]))
    }

    pub fn merge(mut self, mut other: Inbox) -> Inbox {
        if self.0.len() < other.0.len() {
            std::mem::swap(&mut self, &mut other);
        }
        for (key, msg) in other.0 {
            let merged = match self.0.remove(&key) {
                Some(old) => merge_msg(old, msg),
                None => msg,
            };
            self.0.insert(key, merged);
        }
        self
    }
}

/// Applies [`join_mapper`] to every track named in the inbox. An empty
/// false message for a track the vertex never held is a no-op.
pub fn apply_inbox(old: &VertexState, inbox: Inbox) -> VertexState {
    let mut next = old.clone();
    for (key, msg) in inbox.0 {
        let prev = old.tracks.get(&key);
        if prev.is_none() && msg.m_t.is_empty() {
            continue;
        }
        next.set(key, join_mapper(prev, msg));
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::BindingRow;
    use crate::rdf::TermId;

    fn table(x: &[u32]) -> MTable {
        let rows = x.iter().map(|&t| std::iter::once(("x", TermId(t))).collect::<BindingRow>());
        MTable::from_rows([Variable::new("x")], rows).unwrap()
    }

    fn msg(x: &[u32], end_flag: bool) -> VertexMessage {
        VertexMessage { m_t: table(x), end_flag }
    }

    fn track(x: &[u32], end_flag: bool) -> Track {
        Track { m_t: Arc::new(table(x)), end_flag }
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_msg(VertexMessage::to_src(), VertexMessage::to_src()), VertexMessage::to_src());
        assert_eq!(merge_msg(msg(&[1], true), msg(&[2], false)), msg(&[1, 2], true));
        assert_eq!(merge_msg(VertexMessage::to_src(), msg(&[2], true)), msg(&[2], true));
    }

    #[test]
    #[should_panic(expected = "merge_msg invariant")]
    fn merge_schema_mismatch_panics() {
        let y = MTable::from_rows([Variable::new("y")], [std::iter::once(("y", TermId(1))).collect()]).unwrap();
        merge_msg(msg(&[1], true), VertexMessage::to_dst(y));
    }

    #[test]
    fn join_mapper_cases() {
        // old=(T,true), msg=(∅,false) -> (T,false)
        assert_eq!(join_mapper(Some(&track(&[1], true)), VertexMessage::to_src()), track(&[1], false));
        // old=(∅,false), msg=(T',true) -> (T',true)
        assert_eq!(join_mapper(None, msg(&[2], true)), track(&[2], true));
        // old=(T,true), msg=(T',true) -> (T',true)
        assert_eq!(join_mapper(Some(&track(&[1], true)), msg(&[2], true)), track(&[2], true));
    }

    #[test]
    fn inbox_is_per_track() {
        let a = Inbox::single(TrackKey::Anchor(0), msg(&[1], true));
        let b = Inbox::single(TrackKey::Var(Variable::new("x")), VertexMessage::to_src());
        let c = Inbox::single(TrackKey::Anchor(0), msg(&[2], true));
        let merged = a.merge(b).merge(c);
        assert_eq!(merged.0.len(), 2);
        assert_eq!(merged.0[&TrackKey::Anchor(0)], msg(&[1, 2], true));

        let mut state = VertexState::default();
        state.set(TrackKey::Var(Variable::new("x")), track(&[5], true));
        let next = apply_inbox(&state, merged);
        assert!(!next.track(&TrackKey::Var(Variable::new("x"))).unwrap().end_flag);
        assert_eq!(next.live(&TrackKey::Anchor(0)).unwrap().len(), 2);
        assert!(state.is_end(), "old state untouched");
    }

    #[test]
    fn false_message_without_track_is_ignored() {
        let next = apply_inbox(&VertexState::default(), Inbox::single(TrackKey::Anchor(3), VertexMessage::to_src()));
        assert_eq!(next, VertexState::default());
    }
}
