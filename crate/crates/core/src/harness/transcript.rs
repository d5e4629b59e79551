//! Canonical JSON transcripts.
//!
//! One object per logged event, fields in the order
//! `seq, direction, kind, h, e, sender, receiver`, with `h`/`e` omitted when
//! a message does not carry them. Identical seeds give identical bytes.

use serde::{Deserialize, Serialize};

use super::channel::{Direction, LogEntry};
use crate::error::Result;
use crate::protocol::Message;

#[derive(Serialize, Deserialize)]
struct Event {
    seq: u64,
    direction: Direction,
    #[serde(flatten)]
    message: Message,
}

pub fn serialize_transcript(log: &[LogEntry]) -> Vec<u8> {
    let events: Vec<Event> = log
        .iter()
        .map(|entry| Event {
            seq: entry.seq,
            direction: entry.direction,
            message: entry.message.clone(),
        })
        .collect();
    serde_json::to_vec_pretty(&events).expect("transcript serialization cannot fail")
}

pub fn parse_transcript(bytes: &[u8]) -> Result<Vec<LogEntry>> {
    let events: Vec<Event> = serde_json::from_slice(bytes)?;
    Ok(events
        .into_iter()
        .map(|ev| LogEntry {
            seq: ev.seq,
            direction: ev.direction,
            wire: ev.message.to_wire(),
            message: ev.message,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::channel::Channel;
    use crate::protocol::{run_session, ALICE, BOB};
    use crate::ring::{Params, Poly};
    use crate::sampling::SeededRng;

    #[test]
    fn empty_log() {
        assert_eq!(serialize_transcript(&[]), b"[]");
        assert!(parse_transcript(b"[]").unwrap().is_empty());
    }

    #[test]
    fn field_order_and_omission() {
        let mut ch = Channel::honest();
        ch.transmit(Message::m1(Poly::from_coeffs(vec![1, 0, -1]), ALICE, BOB))
            .unwrap();
        let text = String::from_utf8(serialize_transcript(ch.log())).unwrap();
        let compact: String = text.split_whitespace().collect();
        assert_eq!(
            compact,
            r#"[{"seq":0,"direction":"a->b","kind":"M1","h":[1,0,-1],"sender":"alice","receiver":"bob"}]"#
        );
    }

    #[test]
    fn round_trip() {
        let params = Params::with_weight(11, 3, 64, 2).unwrap();
        let mut ch = Channel::honest();
        run_session(&params, SeededRng::new(4), SeededRng::new(5), &mut ch).unwrap();
        let bytes = serialize_transcript(ch.log());
        assert_eq!(parse_transcript(&bytes).unwrap(), ch.log());
    }
}
