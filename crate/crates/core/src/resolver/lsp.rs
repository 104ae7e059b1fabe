//! Language-server backend: JSON-RPC 2.0 over stdio with `Content-Length`
//! framing.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use url::Url;

use super::{sort_dedup, BackendKind, Location, SymbolResolver};
use crate::error::{Error, Result};
use crate::lang::lexer::comment_spans;
use crate::lang::syntax::LineIndex;
use crate::snapshot::{CursorPos, RepoSnapshot, Version};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

/// Writes one framed message.
pub fn write_message(w: &mut impl Write, msg: &Value) -> std::io::Result<()> {
    let body = serde_json::to_vec(msg)?;
    write!(w, "Content-Length: {}\r\n\r\n", body.len())?;
    w.write_all(&body)?;
    w.flush()
}

/// Reads one framed message; `Ok(None)` at end of stream.
pub fn read_message(r: &mut impl BufRead) -> std::io::Result<Option<Value>> {
    let mut len = None;
    loop {
        let mut line = String::new();
        if r.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let line = line.trim_end();
        if line.is_empty() {
            if len.is_some() {
                break;
            }
            continue;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                len = v.trim().parse::<usize>().ok();
            }
        }
    }
    let mut body = vec![0; len.expect("loop exits only with a length")];
    r.read_exact(&mut body)?;
    serde_json::from_slice(&body)
        .map(Some)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

/// One JSON-RPC connection. Requests are serialized; each waits up to the
/// timeout and is retried once.
pub struct LspConnection {
    writer: Box<dyn Write + Send>,
    incoming: Receiver<Value>,
    next_id: i64,
    timeout: Duration,
    child: Option<Child>,
}

impl LspConnection {
    pub fn new(reader: impl Read + Send + 'static, writer: impl Write + Send + 'static, timeout: Duration) -> Self {
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let mut reader = BufReader::new(reader);
            while let Ok(Some(msg)) = read_message(&mut reader) {
                if tx.send(msg).is_err() {
                    break;
                }
            }
        });
        LspConnection {
            writer: Box::new(writer),
            incoming: rx,
            next_id: 1,
            timeout,
            child: None,
        }
    }

    /// Launches `command` with `root` as working directory.
    pub fn spawn(command: &[String], root: &Path, timeout: Duration) -> Result<Self> {
        let (prog, args) = command
            .split_first()
            .ok_or_else(|| Error::Config("empty language server command".into()))?;
        let mut child = Command::new(prog)
            .args(args)
            .current_dir(root)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::BackendUnavailable(format!("cannot start {prog}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut conn = LspConnection::new(stdout, stdin, timeout);
        conn.child = Some(child);
        Ok(conn)
    }

    fn send(&mut self, msg: &Value) -> Result<()> {
        write_message(&mut self.writer, msg).map_err(|e| Error::BackendUnavailable(format!("write failed: {e}")))
    }

    pub fn notify(&mut self, method: &str, params: Value) -> Result<()> {
        self.send(&json!({"jsonrpc": "2.0", "method": method, "params": params}))
    }

    pub fn request(&mut self, method: &str, params: Value) -> Result<Value> {
        match self.request_once(method, &params) {
            Err(Error::BackendUnavailable(first)) => {
                tracing::warn!(method, %first, "language server request failed, retrying");
                self.request_once(method, &params)
            }
            other => other,
        }
    }

    fn request_once(&mut self, method: &str, params: &Value) -> Result<Value> {
        let id = self.next_id;
        self.next_id += 1;
        self.send(&json!({"jsonrpc": "2.0", "id": id, "method": method, "params": params}))?;
        let deadline = Instant::now() + self.timeout;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            let msg = match self.incoming.recv_timeout(left) {
                Ok(m) => m,
                Err(RecvTimeoutError::Timeout) => {
                    return Err(Error::BackendUnavailable(format!("{method} timed out")));
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(Error::BackendUnavailable("server closed the connection".into()));
                }
            };
            match (msg.get("id"), msg.get("method")) {
                // Server-initiated request: acknowledge with an empty result.
                (Some(sid), Some(_)) => {
                    let sid = sid.clone();
                    self.send(&json!({"jsonrpc": "2.0", "id": sid, "result": null}))?;
                }
                (Some(rid), None) if rid.as_i64() == Some(id) => {
                    if let Some(err) = msg.get("error") {
                        return Err(Error::BackendUnavailable(format!("{method}: {err}")));
                    }
                    return Ok(msg.get("result").cloned().unwrap_or(Value::Null));
                }
                _ => {}
            }
        }
    }

    pub fn initialize(&mut self, root: &Path) -> Result<()> {
        let uri = dir_uri(root)?;
        self.request(
            "initialize",
            json!({
                "processId": std::process::id(),
                "rootUri": uri,
                "capabilities": {},
                "workspaceFolders": [{"uri": uri, "name": "snapshot"}],
            }),
        )?;
        self.notify("initialized", json!({}))
    }

    pub fn shutdown(&mut self) {
        let _ = self.request_once("shutdown", &Value::Null);
        let _ = self.notify("exit", Value::Null);
        if let Some(mut child) = self.child.take() {
            let _ = child.wait();
        }
    }
}

impl Drop for LspConnection {
    fn drop(&mut self) {
        if let Some(mut child) = self.child.take() {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

fn dir_uri(root: &Path) -> Result<String> {
    let abs = std::fs::canonicalize(root).map_err(|e| Error::io(format!("resolving {}", root.display()), e))?;
    Url::from_directory_path(&abs)
        .map(|u| u.to_string())
        .map_err(|_| Error::Config(format!("not an absolute path: {}", abs.display())))
}

/// Converts a character column on `line` to UTF-16 code units.
pub fn to_utf16_col(line: &str, col: usize) -> usize {
    line.chars().take(col).map(char::len_utf16).sum()
}

pub fn from_utf16_col(line: &str, units: usize) -> usize {
    let mut seen = 0;
    for (i, c) in line.chars().enumerate() {
        if seen >= units {
            return i;
        }
        seen += c.len_utf16();
    }
    line.chars().count()
}

struct Session {
    conn: LspConnection,
    root: PathBuf,
    opened: HashSet<String>,
}

/// Transport factory, so that tests can supply in-process servers.
pub type Connector = Box<dyn Fn(&Path) -> Result<LspConnection> + Send + Sync>;

/// Resolver backed by one language server per snapshot version, each rooted
/// at that version's directory and started on first use.
pub struct LspResolver {
    snapshot: RepoSnapshot,
    connect: Connector,
    sessions: [Mutex<Option<Session>>; 2],
}

fn slot(v: Version) -> usize {
    match v {
        Version::Pre => 0,
        Version::Post => 1,
    }
}

impl LspResolver {
    pub fn new(snapshot: RepoSnapshot, command: Vec<String>, timeout: Duration) -> Self {
        Self::with_connector(
            snapshot,
            Box::new(move |root: &Path| LspConnection::spawn(&command, root, timeout)),
        )
    }

    pub fn with_connector(snapshot: RepoSnapshot, connect: Connector) -> Self {
        LspResolver {
            snapshot,
            connect,
            sessions: [Mutex::new(None), Mutex::new(None)],
        }
    }

    fn with_session<T>(&self, v: Version, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let mut guard = self.sessions[slot(v)].lock().unwrap_or_else(|p| p.into_inner());
        if guard.is_none() {
            let root = self.snapshot.root(v).to_path_buf();
            let mut conn = (self.connect)(&root)?;
            conn.initialize(&root)?;
            *guard = Some(Session {
                conn,
                root,
                opened: HashSet::new(),
            });
        }
        let session = guard.as_mut().expect("initialized above");
        let out = f(session);
        if matches!(out, Err(Error::BackendUnavailable(_))) {
            // Drop the broken session so that a later call starts afresh.
            *guard = None;
        }
        out
    }

    fn uri(&self, root: &Path, file: &str) -> Result<String> {
        let abs = std::fs::canonicalize(root)
            .map_err(|e| Error::io(format!("resolving {}", root.display()), e))?
            .join(file);
        Url::from_file_path(&abs)
            .map(|u| u.to_string())
            .map_err(|_| Error::Config(format!("not an absolute path: {}", abs.display())))
    }

    fn position(&self, loc: &Location) -> Result<Value> {
        let text = self.snapshot.file(loc.version, &loc.file)?;
        let idx = LineIndex::new(text);
        let p = loc.range.start;
        if p.line >= idx.line_count() {
            return Err(Error::CursorNotOnIdentifier {
                line: p.line,
                column: p.column,
            });
        }
        Ok(json!({"line": p.line, "character": to_utf16_col(idx.line_text(p.line), p.column)}))
    }

    fn query(&self, method: &str, loc: &Location, extra: Value) -> Result<Value> {
        let position = self.position(loc)?;
        let text = self.snapshot.file(loc.version, &loc.file)?.to_string();
        self.with_session(loc.version, |s| {
            let uri = self.uri(&s.root, &loc.file)?;
            if s.opened.insert(loc.file.clone()) {
                s.conn.notify(
                    "textDocument/didOpen",
                    json!({"textDocument": {"uri": uri, "languageId": "java", "version": 1, "text": text}}),
                )?;
            }
            let mut params = json!({"textDocument": {"uri": uri}, "position": position});
            if let (Some(p), Some(e)) = (params.as_object_mut(), extra.as_object()) {
                p.extend(e.clone());
            }
            s.conn.request(method, params)
        })
    }

    /// Converts wire locations, dropping those outside the snapshot root and
    /// those starting inside a comment of the original file.
    fn convert(&self, v: Version, result: &Value) -> Result<Vec<Location>> {
        let items: Vec<&Value> = match result {
            Value::Null => Vec::new(),
            Value::Array(a) => a.iter().collect(),
            other => vec![other],
        };
        let root = std::fs::canonicalize(self.snapshot.root(v))
            .map_err(|e| Error::io(format!("resolving {}", self.snapshot.root(v).display()), e))?;
        let mut out = Vec::new();
        for item in items {
            let uri = item.get("uri").or_else(|| item.get("targetUri")).and_then(Value::as_str);
            let range = item.get("range").or_else(|| item.get("targetSelectionRange"));
            let (Some(uri), Some(range)) = (uri, range) else { continue };
            let Some(path) = Url::parse(uri).ok().and_then(|u| u.to_file_path().ok()) else { continue };
            let Ok(rel) = path.strip_prefix(&root) else { continue };
            let rel = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            let Some(text) = self.snapshot.get(v, &rel) else { continue };
            let idx = LineIndex::new(text);
            let pos = |p: &Value| -> Option<CursorPos> {
                let line = p.get("line")?.as_u64()? as usize;
                let units = p.get("character")?.as_u64()? as usize;
                let line_text = (line < idx.line_count()).then(|| idx.line_text(line))?;
                Some(CursorPos::new(line, from_utf16_col(line_text, units)))
            };
            let (Some(start), Some(end)) = (
                range.get("start").and_then(&pos),
                range.get("end").and_then(pos),
            ) else {
                continue;
            };
            let loc = Location::new(rel, v, start, end);
            let in_comment = match (loc.span_in(text), comment_spans(text)) {
                (Some(span), Ok(comments)) => comments.iter().any(|&(s, e)| s <= span.start && span.start < e),
                _ => false,
            };
            if !in_comment {
                out.push(loc);
            }
        }
        Ok(sort_dedup(out))
    }

    pub fn shutdown(&self) {
        for s in &self.sessions {
            if let Some(mut session) = s.lock().unwrap_or_else(|p| p.into_inner()).take() {
                session.conn.shutdown();
            }
        }
    }
}

impl Drop for LspResolver {
    fn drop(&mut self) {
        self.shutdown();
    }
}

impl SymbolResolver for LspResolver {
    fn kind(&self) -> BackendKind {
        BackendKind::Lsp
    }

    fn goto_definition(&self, loc: &Location) -> Result<Vec<Location>> {
        let result = self.query("textDocument/definition", loc, json!({}))?;
        self.convert(loc.version, &result)
    }

    fn find_references(&self, loc: &Location) -> Result<Vec<Location>> {
        let result = self.query(
            "textDocument/references",
            loc,
            json!({"context": {"includeDeclaration": false}}),
        )?;
        self.convert(loc.version, &result)
    }
}
