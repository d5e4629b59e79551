use serde::{Deserialize, Serialize};

use crate::adversary::Interceptor;
use crate::error::Result;
use crate::protocol::{Message, Transport, ALICE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "a->b")]
    AToB,
    #[serde(rename = "b->a")]
    BToA,
    /// Original message taken off the wire by the interceptor.
    #[serde(rename = "captured")]
    Captured,
    /// Replacement the interceptor delivered instead.
    #[serde(rename = "forwarded")]
    Forwarded,
}

impl Direction {
    fn of(msg: &Message) -> Self {
        if msg.sender == ALICE {
            Direction::AToB
        } else {
            Direction::BToA
        }
    }
}

/// One logged transmission. `wire` is the exact byte encoding of `message`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub seq: u64,
    pub direction: Direction,
    pub message: Message,
    pub wire: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    Honest,
    Mitm,
}

/// In-memory wire between Alice and Bob with an optional interceptor.
///
/// Every message is encoded to bytes and decoded again on delivery, so what
/// a receiver sees is exactly what crossed the wire.
#[derive(Debug)]
pub struct Channel {
    mode: ChannelMode,
    interceptor: Option<Interceptor>,
    log: Vec<LogEntry>,
}

impl Channel {
    pub fn honest() -> Self {
        Channel {
            mode: ChannelMode::Honest,
            interceptor: None,
            log: Vec::new(),
        }
    }

    pub fn mitm(interceptor: Interceptor) -> Self {
        Channel {
            mode: ChannelMode::Mitm,
            interceptor: Some(interceptor),
            log: Vec::new(),
        }
    }

    pub fn mode(&self) -> ChannelMode {
        self.mode
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn interceptor(&self) -> Option<&Interceptor> {
        self.interceptor.as_ref()
    }

    pub fn finish(self) -> (Vec<LogEntry>, Option<Interceptor>) {
        (self.log, self.interceptor)
    }

    fn record(&mut self, direction: Direction, message: Message) -> &LogEntry {
        let wire = message.to_wire();
        let seq = self.log.len() as u64;
        self.log.push(LogEntry {
            seq,
            direction,
            message,
            wire,
        });
        self.log.last().unwrap()
    }

    pub fn transmit(&mut self, msg: Message) -> Result<Message> {
        let replacement = match self.interceptor.as_mut() {
            Some(eve) => eve.intercept(&msg)?,
            None => None,
        };
        let delivered = match replacement {
            None => self.record(Direction::of(&msg), msg),
            Some(sub) => {
                self.record(Direction::Captured, msg);
                self.record(Direction::Forwarded, sub)
            }
        };
        Message::from_wire(&delivered.wire)
    }
}

impl Transport for Channel {
    fn deliver(&mut self, msg: Message) -> Result<Message> {
        self.transmit(msg)
    }
}
