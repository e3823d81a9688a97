//! Process isolation for untrusted programs.
//!
//! Two mechanisms:
//!
//! - [`SandboxMode::Jail`]: fresh mount and network namespaces, a chroot
//!   whose only content is a read-only bind of `/usr` plus a private work
//!   directory, and an unprivileged uid. Requires root.
//! - [`SandboxMode::Rlimits`]: resource limits only. Used when the jail
//!   cannot be set up; it bounds CPU, memory and output but does not hide
//!   the host filesystem or network.
//!
//! Both modes apply the same rlimits and the same wall-clock watchdog.

use std::ffi::CString;
use std::fs;
use std::io::{self, Read, Write};
use std::os::unix::ffi::OsStrExt;
use std::os::unix::fs::{symlink, PermissionsExt};
use std::os::unix::process::{CommandExt, ExitStatusExt};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitStatus, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use tempfile::TempDir;
use thiserror::Error;

/// uid/gid `nobody`.
const JAIL_ID: libc::uid_t = 65534;
const STDERR_CAP: usize = 64 << 10;

#[derive(Debug, Error)]
pub enum SandboxError {
    #[error("sandbox setup failed: {0}")]
    Setup(String),
    #[error("sandbox i/o error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandboxMode {
    Jail,
    Rlimits,
}

/// Per-process resource limits.
#[derive(Debug, Clone)]
pub struct ProcLimits {
    pub cpu_ms: u64,
    pub wall_ms: u64,
    /// RLIMIT_AS in bytes; `None` leaves address space unbounded.
    pub address_space: Option<u64>,
    pub stack: Option<u64>,
    pub output_cap: usize,
    pub max_file_size: u64,
    pub max_processes: u64,
}

/// What happened to one sandboxed process.
#[derive(Debug, Clone)]
pub struct RawRun {
    pub status: ExitStatus,
    pub stdout: Vec<u8>,
    pub stdout_truncated: bool,
    pub stderr: Vec<u8>,
    pub cpu_ms: u64,
    pub wall_ms: u64,
    pub peak_rss_kib: u64,
    pub wall_killed: bool,
}

impl RawRun {
    pub fn signal(&self) -> Option<i32> {
        self.status.signal()
    }
}

/// Host directories exposed read-only inside the jail.
const JAIL_SYSTEM_DIRS: [&str; 6] = ["/usr", "/bin", "/lib", "/lib64", "/lib32", "/sbin"];

#[derive(Debug)]
pub struct Sandbox {
    mode: SandboxMode,
    scratch: PathBuf,
}

impl Sandbox {
    /// Uses the jail when it works on this host, otherwise rlimits only.
    pub fn detect() -> Sandbox {
        let jail = Sandbox {
            mode: SandboxMode::Jail,
            scratch: std::env::temp_dir(),
        };
        // SAFETY: geteuid has no preconditions.
        if unsafe { libc::geteuid() } == 0 && jail.probe() {
            jail
        } else {
            log::warn!("kernel isolation unavailable; falling back to rlimit-only sandbox");
            Sandbox::with_mode(SandboxMode::Rlimits)
        }
    }

    pub fn with_mode(mode: SandboxMode) -> Sandbox {
        Sandbox {
            mode,
            scratch: std::env::temp_dir(),
        }
    }

    pub fn mode(&self) -> SandboxMode {
        self.mode
    }

    fn probe(&self) -> bool {
        let Ok(cell) = self.cell() else { return false };
        let limits = ProcLimits {
            cpu_ms: 2_000,
            wall_ms: 5_000,
            address_space: None,
            stack: None,
            output_cap: 1024,
            max_file_size: 1 << 20,
            max_processes: 16,
        };
        let argv = ["/usr/bin/env".to_owned(), "true".to_owned()];
        matches!(self.run(&cell, &argv, b"", &limits), Ok(run) if run.status.success())
    }

    /// A fresh, empty cell. Its work directory is where programs run.
    pub fn cell(&self) -> Result<Cell, SandboxError> {
        let root = tempfile::Builder::new()
            .prefix("arena-cell-")
            .tempdir_in(&self.scratch)?;
        let work = root.path().join("work");
        fs::create_dir(&work)?;
        if self.mode == SandboxMode::Jail {
            fs::set_permissions(root.path(), fs::Permissions::from_mode(0o755))?;
            fs::create_dir(root.path().join("tmp"))?;
            // SAFETY: path is a valid NUL-terminated string for the call.
            let c = cstring(&work)?;
            if unsafe { libc::chown(c.as_ptr(), JAIL_ID, JAIL_ID) } != 0 {
                return Err(io::Error::last_os_error().into());
            }
        }
        Ok(Cell {
            root,
            mode: self.mode,
        })
    }

    /// Runs `argv` inside `cell`. `argv[0]` must be an absolute path valid
    /// inside the cell (see [`Cell::program_path`]).
    pub fn run(
        &self,
        cell: &Cell,
        argv: &[String],
        stdin: &[u8],
        limits: &ProcLimits,
    ) -> Result<RawRun, SandboxError> {
        let (program, args) = argv
            .split_first()
            .ok_or_else(|| SandboxError::Setup("empty argv".into()))?;
        let mut cmd = Command::new(program);
        cmd.args(args)
            .env_clear()
            .env("PATH", "/usr/bin:/bin")
            .env("LANG", "C.UTF-8")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped());

        let rlimits = rlimit_table(limits, self.mode);
        match self.mode {
            SandboxMode::Jail => {
                let jail = JailSpec::prepare(cell.root.path())?;
                cmd.env("HOME", "/work").env("TMPDIR", "/work");
                // SAFETY: the closure only issues raw syscalls on data
                // prepared before fork; it does not allocate.
                unsafe {
                    cmd.pre_exec(move || {
                        enter_new_session()?;
                        jail.enter()?;
                        apply_rlimits(&rlimits)?;
                        drop_privileges()
                    });
                }
            }
            SandboxMode::Rlimits => {
                let work = cell.work_dir();
                cmd.current_dir(&work)
                    .env("HOME", &work)
                    .env("TMPDIR", &work);
                // SAFETY: as above, syscalls only.
                unsafe {
                    cmd.pre_exec(move || {
                        enter_new_session()?;
                        apply_rlimits(&rlimits)
                    });
                }
            }
        }

        let started = Instant::now();
        let mut child = cmd
            .spawn()
            .map_err(|e| SandboxError::Setup(format!("spawn {program}: {e}")))?;
        let pid = child.id() as libc::pid_t;

        let mut child_stdin = child.stdin.take().expect("piped stdin");
        let input = stdin.to_vec();
        let writer = thread::spawn(move || {
            // The program may exit without reading everything.
            let _ = child_stdin.write_all(&input);
        });
        let stdout = child.stdout.take().expect("piped stdout");
        let cap = limits.output_cap;
        let out_reader = thread::spawn(move || read_capped(stdout, cap));
        let stderr = child.stderr.take().expect("piped stderr");
        let err_reader = thread::spawn(move || read_capped(stderr, STDERR_CAP));

        let deadline = started + Duration::from_millis(limits.wall_ms);
        let mut wall_killed = false;
        let (raw_status, usage) = loop {
            if let Some(done) = try_wait4(pid, false)? {
                break done;
            }
            if Instant::now() >= deadline {
                kill_group(pid);
                wall_killed = true;
                break try_wait4(pid, true)?.expect("blocking wait4 returns a status");
            }
            thread::sleep(Duration::from_millis(2));
        };
        let wall_ms = started.elapsed().as_millis() as u64;
        // Reap stragglers that still hold the pipes open.
        kill_group(pid);
        let _ = writer.join();
        let (stdout, stdout_truncated) = out_reader.join().unwrap_or_default();
        let (stderr, _) = err_reader.join().unwrap_or_default();

        let cpu_ms = timeval_ms(usage.ru_utime) + timeval_ms(usage.ru_stime);
        Ok(RawRun {
            status: ExitStatus::from_raw(raw_status),
            stdout,
            stdout_truncated,
            stderr,
            cpu_ms,
            wall_ms,
            peak_rss_kib: usage.ru_maxrss.max(0) as u64,
            wall_killed,
        })
    }
}

/// A disposable directory tree a program runs in.
#[derive(Debug)]
pub struct Cell {
    root: TempDir,
    mode: SandboxMode,
}

impl Cell {
    /// Host path of the writable work directory.
    pub fn work_dir(&self) -> PathBuf {
        self.root.path().join("work")
    }

    /// Path of a work-directory file as the sandboxed program sees it.
    pub fn program_path(&self, file: &str) -> String {
        match self.mode {
            SandboxMode::Jail => format!("/work/{file}"),
            SandboxMode::Rlimits => self.work_dir().join(file).to_string_lossy().into_owned(),
        }
    }

    /// Copies the regular files of `dir` into the work directory.
    pub fn populate_from(&self, dir: &Path) -> io::Result<()> {
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if entry.file_type()?.is_file() {
                let dest = self.work_dir().join(entry.file_name());
                fs::copy(entry.path(), &dest)?;
            }
        }
        Ok(())
    }

    pub fn write_file(&self, name: &str, contents: &[u8]) -> io::Result<()> {
        fs::write(self.work_dir().join(name), contents)
    }

    /// Makes work-directory files writable by the jailed uid.
    pub fn hand_over(&self) -> io::Result<()> {
        if self.mode != SandboxMode::Jail {
            return Ok(());
        }
        for entry in fs::read_dir(self.work_dir())? {
            let c = cstring(&entry?.path())?;
            // SAFETY: valid NUL-terminated path.
            if unsafe { libc::chown(c.as_ptr(), JAIL_ID, JAIL_ID) } != 0 {
                return Err(io::Error::last_os_error());
            }
        }
        Ok(())
    }
}

/// Everything the child needs to enter the jail, resolved before fork.
struct JailSpec {
    root: CString,
    work: CString,
    binds: Vec<CString>,
    targets: Vec<CString>,
}

impl JailSpec {
    fn prepare(root: &Path) -> Result<JailSpec, SandboxError> {
        let mut binds = Vec::new();
        let mut targets = Vec::new();
        for dir in JAIL_SYSTEM_DIRS {
            let host = Path::new(dir);
            let Ok(meta) = fs::symlink_metadata(host) else {
                continue;
            };
            let inside = root.join(dir.trim_start_matches('/'));
            // A cell may host several runs; its skeleton is built once.
            let present = fs::symlink_metadata(&inside).is_ok();
            if meta.file_type().is_symlink() {
                if !present {
                    symlink(fs::read_link(host)?, &inside)?;
                }
            } else if meta.is_dir() {
                if !present {
                    fs::create_dir(&inside)?;
                }
                binds.push(cstring(host)?);
                targets.push(cstring(&inside)?);
            }
        }
        Ok(JailSpec {
            root: cstring(root)?,
            work: CString::new("/work").unwrap(),
            binds,
            targets,
        })
    }

    fn enter(&self) -> io::Result<()> {
        // SAFETY: raw syscalls with valid pointers to NUL-terminated strings
        // owned by `self`, which outlives the call.
        unsafe {
            check(libc::unshare(libc::CLONE_NEWNS | libc::CLONE_NEWNET))?;
            check(libc::mount(
                std::ptr::null(),
                c"/".as_ptr(),
                std::ptr::null(),
                libc::MS_REC | libc::MS_PRIVATE,
                std::ptr::null(),
            ))?;
            for (src, dst) in self.binds.iter().zip(&self.targets) {
                check(libc::mount(
                    src.as_ptr(),
                    dst.as_ptr(),
                    std::ptr::null(),
                    libc::MS_BIND | libc::MS_REC,
                    std::ptr::null(),
                ))?;
                check(libc::mount(
                    std::ptr::null(),
                    dst.as_ptr(),
                    std::ptr::null(),
                    libc::MS_BIND | libc::MS_REMOUNT | libc::MS_RDONLY | libc::MS_NOSUID,
                    std::ptr::null(),
                ))?;
            }
            check(libc::chroot(self.root.as_ptr()))?;
            check(libc::chdir(self.work.as_ptr()))?;
        }
        Ok(())
    }
}

fn check(ret: libc::c_int) -> io::Result<()> {
    if ret == -1 {
        Err(io::Error::last_os_error())
    } else {
        Ok(())
    }
}

fn enter_new_session() -> io::Result<()> {
    // SAFETY: setsid has no memory-safety preconditions.
    check(unsafe { libc::setsid() })
}

fn drop_privileges() -> io::Result<()> {
    // SAFETY: plain syscalls; order matters (groups, gid, then uid).
    unsafe {
        check(libc::setgroups(0, std::ptr::null()))?;
        check(libc::setgid(JAIL_ID))?;
        check(libc::setuid(JAIL_ID))?;
    }
    Ok(())
}

type RlimitTable = Vec<(libc::__rlimit_resource_t, libc::rlim_t)>;

fn rlimit_table(limits: &ProcLimits, mode: SandboxMode) -> RlimitTable {
    let cpu_secs = limits.cpu_ms.div_ceil(1000) + 1;
    let mut table: RlimitTable = vec![
        (libc::RLIMIT_CPU, cpu_secs),
        (libc::RLIMIT_CORE, 0),
        (libc::RLIMIT_FSIZE, limits.max_file_size),
    ];
    if let Some(bytes) = limits.address_space {
        table.push((libc::RLIMIT_AS, bytes));
    }
    if let Some(bytes) = limits.stack {
        table.push((libc::RLIMIT_STACK, bytes));
    }
    // Process counts are per uid; only meaningful once we are `nobody`.
    if mode == SandboxMode::Jail {
        table.push((libc::RLIMIT_NPROC, limits.max_processes));
    }
    table
}

fn apply_rlimits(table: &RlimitTable) -> io::Result<()> {
    for &(resource, value) in table {
        let lim = libc::rlimit {
            rlim_cur: value,
            rlim_max: value,
        };
        // SAFETY: `lim` is a valid rlimit struct on the stack.
        check(unsafe { libc::setrlimit(resource, &lim) })?;
    }
    Ok(())
}

fn try_wait4(pid: libc::pid_t, block: bool) -> io::Result<Option<(i32, libc::rusage)>> {
    let mut status = 0;
    // SAFETY: zeroed rusage is a valid value; pointers are to locals.
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let flags = if block { 0 } else { libc::WNOHANG };
    loop {
        // SAFETY: see above.
        let ret = unsafe { libc::wait4(pid, &mut status, flags, &mut usage) };
        match ret {
            0 => return Ok(None),
            r if r == pid => return Ok(Some((status, usage))),
            _ => {
                let err = io::Error::last_os_error();
                if err.kind() != io::ErrorKind::Interrupted {
                    return Err(err);
                }
            }
        }
    }
}

fn kill_group(pid: libc::pid_t) {
    // SAFETY: signalling a process group we created with setsid.
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
}

fn read_capped(mut source: impl Read, cap: usize) -> (Vec<u8>, bool) {
    let mut kept = Vec::new();
    let mut truncated = false;
    let mut buf = [0u8; 8192];
    loop {
        match source.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => {
                let room = cap.saturating_sub(kept.len());
                if n > room {
                    truncated = true;
                }
                kept.extend_from_slice(&buf[..n.min(room)]);
            }
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(_) => break,
        }
    }
    (kept, truncated)
}

fn timeval_ms(tv: libc::timeval) -> u64 {
    (tv.tv_sec.max(0) as u64) * 1000 + (tv.tv_usec.max(0) as u64) / 1000
}

fn cstring(path: &Path) -> io::Result<CString> {
    CString::new(path.as_os_str().as_bytes())
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))
}
