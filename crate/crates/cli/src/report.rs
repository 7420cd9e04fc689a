//! Human summary followed by a `[data]` section of `key = value` lines.

use std::fmt::{Display, Write as _};

use tourney::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A decision came out negative.
    Negative,
    Exhausted,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Exhausted => 2,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Negative => "negative",
            Status::Exhausted => "exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    summary: Vec<String>,
    data: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            summary: Vec::new(),
            data: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.data.push((key.to_string(), value.to_string()));
    }

    /// Exact fraction with a decimal annotation.
    pub fn ratio(&mut self, key: &str, r: Rational) {
        self.put(key, fraction(r));
    }

    pub fn list<T: Display>(&mut self, key: &str, items: impl IntoIterator<Item = T>) {
        let joined: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
        self.put(key, joined.join(" "));
    }

    pub fn render(&self) -> String {
        let mut s = format!("tourney {}: {}\n", self.command, self.status.word());
        for line in &self.summary {
            let _ = writeln!(s, "  {line}");
        }
        s.push_str("\n[data]\n");
        let _ = writeln!(s, "status = {}", self.status.word());
        for (k, v) in &self.data {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

pub fn fraction(r: Rational) -> String {
    let dec = *r.numer() as f64 / *r.denom() as f64;
    format!("{r} ({dec:.6})")
}

/// 1-based vertex list.
pub fn vertices(vs: &[usize]) -> String {
    let v: Vec<String> = vs.iter().map(|x| (x + 1).to_string()).collect();
    v.join(" ")
}
