use serde_json::{json, Map, Value as Json};

/// What a subcommand prints and how the process exits.
///
/// Exit codes: 0 valid or success, 1 countermodel or other negative
/// verdict, 2 unknown, 3 usage or parse error.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub verdict: String,
    pub exit: u8,
    pub lines: Vec<String>,
    pub payload: Map<String, Json>,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

impl Report {
    pub fn new(command: &'static str, verdict: impl Into<String>, exit: u8) -> Report {
        Report { command, verdict: verdict.into(), exit, lines: Vec::new(), payload: Map::new() }
    }

    pub fn usage_error(command: &'static str, message: &str) -> Report {
        let mut r = Report::new(command, "error", EXIT_USAGE);
        r.payload.insert("error".into(), json!(message));
        r
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn set(&mut self, key: &str, value: Json) {
        self.payload.insert(key.to_string(), value);
    }

    pub fn to_text(&self, styled: bool) -> String {
        let verdict = if styled {
            let color = match self.exit {
                EXIT_OK => "32",
                EXIT_NEGATIVE => "31",
                EXIT_UNKNOWN => "33",
                _ => "35",
            };
            format!("\x1b[1;{color}m{}\x1b[0m", self.verdict)
        } else {
            self.verdict.clone()
        };
        let mut out = format!("verdict: {verdict}\n");
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn to_json_text(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("verdict".into(), json!(self.verdict));
        obj.insert("exit_code".into(), json!(self.exit));
        obj.extend(self.payload.clone());
        let mut text = serde_json::to_string_pretty(&Json::Object(obj)).expect("json");
        text.push('\n');
        text
    }
}
