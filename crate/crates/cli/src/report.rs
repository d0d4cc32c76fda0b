//! Command outcome: echoed command line, payload lines, diagnostics, and
//! a status that fixes the exit code. Rendering is fully deterministic.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
            Status::Error => write!(f, "error"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: String) -> Report {
        Report {
            command,
            status: Status::Pass,
            payload: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.payload.push(line.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.diagnostics.push(note.into());
    }

    pub fn fail(&mut self, reason: impl Into<String>) {
        self.status = Status::Fail;
        self.diagnostics.push(reason.into());
    }

    pub fn error(command: String, reason: impl Into<String>) -> Report {
        Report {
            command,
            status: Status::Error,
            payload: Vec::new(),
            diagnostics: vec![reason.into()],
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// The full textual form; nothing is printed before the outcome is
    /// known, so failed runs never leave partial output behind.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for line in &self.payload {
            out.push_str(line);
            out.push('\n');
        }
        for note in &self.diagnostics {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}
