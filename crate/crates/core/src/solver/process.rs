use std::io::{BufRead, BufReader, Read};
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use wait_timeout::ChildExt;

use super::SolverError;

const STDERR_TAIL: usize = 4096;

pub(crate) struct ProcessRun<T> {
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    pub stdout: T,
    pub stderr_tail: String,
}

/// Runs `program`, feeding its stdout to `parse` on a separate thread and
/// keeping the end of stderr. On timeout the child's whole process group is
/// killed, so wrapper scripts do not leave the real solver running.
pub(crate) fn run<T: Send + 'static>(
    program: &Path,
    args: &[String],
    timeout: Option<Duration>,
    parse: fn(Box<dyn BufRead + Send>) -> T,
) -> Result<ProcessRun<T>, SolverError> {
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|source| SolverError::Spawn {
            program: program.display().to_string(),
            source,
        })?;
    let stdout = child.stdout.take().expect("piped stdout");
    let stderr = child.stderr.take().expect("piped stderr");
    let out_thread = thread::spawn(move || parse(Box::new(BufReader::with_capacity(1 << 16, stdout))));
    let err_thread = thread::spawn(move || tail_of(stderr));

    let ctx = || format!("waiting for {}", program.display());
    let (status, timed_out) = match timeout {
        None => (child.wait().map_err(SolverError::io(ctx()))?, false),
        Some(limit) => match child.wait_timeout(limit).map_err(SolverError::io(ctx()))? {
            Some(status) => (status, false),
            None => {
                kill_group(child.id());
                let _ = child.kill();
                (child.wait().map_err(SolverError::io(ctx()))?, true)
            }
        },
    };
    let stdout = out_thread.join().expect("stdout reader panicked");
    let stderr_tail = err_thread.join().unwrap_or_default();
    Ok(ProcessRun {
        exit_code: status.code(),
        timed_out,
        stdout,
        stderr_tail,
    })
}

fn kill_group(pid: u32) {
    if let Ok(pid) = libc::pid_t::try_from(pid) {
        // SAFETY: plain syscall; the group was created for this child.
        unsafe {
            libc::kill(-pid, libc::SIGKILL);
        }
    }
}

fn tail_of(mut r: impl Read) -> String {
    let mut tail: Vec<u8> = Vec::new();
    let mut buf = [0u8; 8192];
    loop {
        match r.read(&mut buf) {
            Ok(0) | Err(_) => break,
            Ok(k) => {
                tail.extend_from_slice(&buf[..k]);
                if tail.len() > 2 * STDERR_TAIL {
                    tail.drain(..tail.len() - STDERR_TAIL);
                }
            }
        }
    }
    if tail.len() > STDERR_TAIL {
        tail.drain(..tail.len() - STDERR_TAIL);
    }
    String::from_utf8_lossy(&tail).into_owned()
}

#[derive(Debug, Default)]
pub(crate) struct SolverStdout {
    pub status: Option<String>,
    pub model: Vec<i32>,
    pub error: Option<String>,
}

/// Keeps the `s` line and the `v` literals; everything else is dropped.
pub(crate) fn solver_stdout(r: Box<dyn BufRead + Send>) -> SolverStdout {
    let mut out = SolverStdout::default();
    let mut terminated = false;
    for line in r.lines() {
        let Ok(line) = line else {
            out.error.get_or_insert_with(|| "solver output is not UTF-8".into());
            continue;
        };
        if let Some(s) = line.strip_prefix("s ") {
            let s = s.trim().to_string();
            if out.status.as_ref().is_some_and(|old| *old != s) {
                out.error.get_or_insert_with(|| "conflicting status lines".into());
            }
            out.status = Some(s);
        } else if let Some(v) = line.strip_prefix('v') {
            for tok in v.split_whitespace() {
                match tok.parse::<i32>() {
                    Ok(0) => terminated = true,
                    Ok(l) if !terminated => out.model.push(l),
                    Ok(_) => {
                        out.error.get_or_insert_with(|| "literal after model terminator".into());
                    }
                    Err(_) => {
                        out.error
                            .get_or_insert_with(|| format!("malformed model token {tok:?}"));
                    }
                }
            }
        }
    }
    if out.status.as_deref() == Some("SATISFIABLE") && !terminated && out.error.is_none() {
        out.error = Some("model is not terminated by 0".into());
    }
    out
}

/// Whole output, verbatim.
pub(crate) fn verbatim(mut r: Box<dyn BufRead + Send>) -> String {
    let mut s = String::new();
    let mut bytes = Vec::new();
    if r.read_to_end(&mut bytes).is_ok() {
        s = String::from_utf8_lossy(&bytes).into_owned();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &'static str) -> SolverStdout {
        solver_stdout(Box::new(text.as_bytes()))
    }

    #[test]
    fn model_lines() {
        let p = parse("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n");
        assert_eq!(p.status.as_deref(), Some("SATISFIABLE"));
        assert_eq!(p.model, [1, -2, 3]);
        assert!(p.error.is_none());
    }

    #[test]
    fn malformed_models() {
        assert!(parse("s SATISFIABLE\nv 1 x 0\n").error.is_some());
        assert!(parse("s SATISFIABLE\nv 1 2\n").error.is_some());
        assert!(parse("s SATISFIABLE\ns UNSATISFIABLE\n").error.is_some());
    }
}
