"""
External agents speaking newline-delimited JSON.

An adapter is sent one ``observe`` message per round and must answer with one
``act`` message::

    -> {"type": "observe", "round": 3, "feed": [{"stance": "favor", "is_ai": false, "style": "neutral"}]}
    <- {"type": "act", "stance": "against", "text": "optional free text"}

Replies are read on a background thread into a queue so the caller can enforce
a deadline without blocking on the pipe or socket.
"""

import json
import logging
import queue
import shlex
import socket
import subprocess
import threading

from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple, Union

from beliefdyn.core.config import Config
from beliefdyn.core.exceptions import AdapterError, AdapterProtocolError, AdapterTimeout
from beliefdyn.models.schemas import Observation, Post, Stance, StyleTag

logger = logging.getLogger(__name__)

ROLES = ("ai", "human")
_EOF = object()

class NdjsonAdapter:
    def __init__(
        self,
        agent_id: str,
        role: str = "ai",
        deadline: Optional[float] = None,
        style: StyleTag = StyleTag.NEUTRAL,
    ):
        if role not in ROLES:
            raise AdapterError(f"unknown adapter role {role!r}; expected one of {ROLES}")
        self.agent_id = agent_id
        self.role = role
        self.style = style if role == "ai" else StyleTag.NEUTRAL
        self.deadline = Config.ADAPTER_DEADLINE if deadline is None else deadline
        self._write: Optional[Callable[[str], None]] = None
        self._replies: "queue.Queue[Any]" = queue.Queue()
        self._reader: Optional[threading.Thread] = None

    @property
    def is_ai(self) -> bool:
        return self.role == "ai"

    def _attach(self, stream: TextIO, write: Callable[[str], None]) -> None:
        self._write = write
        self._reader = threading.Thread(target=self._pump, args=(stream,), daemon=True)
        self._reader.start()

    def _pump(self, stream: TextIO) -> None:
        try:
            for line in stream:
                if line.strip():
                    self._replies.put(line.strip())
        except (OSError, ValueError):
            pass
        finally:
            self._replies.put(_EOF)

    def connect(self) -> "NdjsonAdapter":
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self) -> "NdjsonAdapter":
        return self.connect()

    def __exit__(self, *exc) -> None:
        self.close()

    def request(self, message: Dict[str, Any], round: int) -> Dict[str, Any]:
        if self._write is None:
            raise AdapterError(f"adapter {self.agent_id!r} is not connected", round)
        try:
            self._write(json.dumps(message, separators=(",", ":")) + "\n")
        except OSError as e:
            raise AdapterProtocolError(f"adapter {self.agent_id!r} write failed: {e}", round)
        try:
            line = self._replies.get(timeout=self.deadline)
        except queue.Empty:
            raise AdapterTimeout(f"adapter {self.agent_id!r} sent no reply within {self.deadline}s", round)
        if line is _EOF:
            raise AdapterProtocolError(f"adapter {self.agent_id!r} closed its stream", round)
        try:
            reply = json.loads(line)
        except json.JSONDecodeError:
            raise AdapterProtocolError(f"adapter {self.agent_id!r} replied with invalid JSON: {line[:80]!r}", round)
        if not isinstance(reply, dict):
            raise AdapterProtocolError(f"adapter {self.agent_id!r} reply is not a JSON object", round)
        return reply

class StdioAdapter(NdjsonAdapter):
    def __init__(self, command: Union[str, List[str]], agent_id: str = "ext-stdio", **kwargs):
        super().__init__(agent_id, **kwargs)
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.proc: Optional[subprocess.Popen] = None

    def connect(self) -> "StdioAdapter":
        try:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise AdapterError(f"cannot start adapter command {self.command!r}: {e}")

        def write(data: str) -> None:
            self.proc.stdin.write(data)
            self.proc.stdin.flush()

        self._attach(self.proc.stdout, write)
        logger.info("Started stdio adapter %s: %s", self.agent_id, " ".join(self.command))
        return self

    def close(self) -> None:
        if self.proc is None:
            return
        try:
            self.proc.stdin.close()
        except OSError:
            pass
        try:
            self.proc.wait(timeout=1)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()
        self.proc = None

class TcpAdapter(NdjsonAdapter):
    def __init__(self, host: str, port: int, agent_id: str = "ext-tcp", **kwargs):
        super().__init__(agent_id, **kwargs)
        self.host = host
        self.port = port
        self.sock: Optional[socket.socket] = None

    def connect(self) -> "TcpAdapter":
        try:
            self.sock = socket.create_connection((self.host, self.port), timeout=self.deadline)
        except OSError as e:
            raise AdapterError(f"cannot reach adapter at {self.host}:{self.port}: {e}")
        self.sock.settimeout(None)
        stream = self.sock.makefile("r", encoding="utf-8")
        self._attach(stream, lambda data: self.sock.sendall(data.encode("utf-8")))
        logger.info("Connected to tcp adapter %s at %s:%d", self.agent_id, self.host, self.port)
        return self

    def close(self) -> None:
        if self.sock is not None:
            try:
                self.sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            self.sock.close()
            self.sock = None

def connect_adapter(address: str, agent_id: str = "ext-0", role: str = "ai", deadline: Optional[float] = None) -> NdjsonAdapter:
    """Builds an adapter from ``tcp://HOST:PORT`` or ``stdio:COMMAND``; the adapter is not yet connected."""
    if address.startswith("tcp://"):
        host, sep, port = address[len("tcp://"):].rpartition(":")
        if not sep or not port.isdigit():
            raise AdapterError(f"malformed tcp adapter address {address!r}")
        return TcpAdapter(host, int(port), agent_id=agent_id, role=role, deadline=deadline)
    if address.startswith("stdio:"):
        return StdioAdapter(address[len("stdio:"):], agent_id=agent_id, role=role, deadline=deadline)
    raise AdapterError(f"unsupported adapter address {address!r}; use tcp://HOST:PORT or stdio:COMMAND")

def observation_message(observation: Observation) -> Dict[str, Any]:
    return {
        "type": "observe",
        "round": observation.round,
        "feed": [
            {"stance": p.stance.value, "is_ai": p.is_ai, "style": p.style.value}
            for p in observation.feed
        ],
    }

def parse_action(reply: Dict[str, Any], round: int) -> Tuple[Stance, Optional[str]]:
    if reply.get("type") != "act":
        raise AdapterProtocolError(f"expected an 'act' reply, got type {reply.get('type')!r}", round)
    try:
        stance = Stance(reply.get("stance"))
    except ValueError:
        raise AdapterProtocolError(f"unknown stance token {reply.get('stance')!r}", round)
    text = reply.get("text")
    if text is not None and not isinstance(text, str):
        raise AdapterProtocolError("'text' must be a string when present", round)
    return stance, text

def external_agent_step(observation: Observation, adapter: NdjsonAdapter) -> Post:
    reply = adapter.request(observation_message(observation), observation.round)
    stance, text = parse_action(reply, observation.round)
    return Post(
        author_id=adapter.agent_id,
        round=observation.round,
        stance=stance,
        is_ai=adapter.is_ai,
        style=adapter.style,
        text=text,
    )
