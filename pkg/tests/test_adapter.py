import json
import socket
import sys
import threading

import pytest

from beliefdyn.core.exceptions import AdapterError, AdapterProtocolError, AdapterTimeout
from beliefdyn.models.adapter import (
    StdioAdapter,
    TcpAdapter,
    connect_adapter,
    external_agent_step,
    observation_message,
    parse_action,
)
from beliefdyn.models.schemas import Observation, Post, Stance, StyleTag

REPLY_AGAINST = """
import json, sys
for line in sys.stdin:
    msg = json.loads(line)
    print(json.dumps({"type": "act", "stance": "against", "text": "round %d" % msg["round"]}), flush=True)
"""

REPLY_MAYBE = """
import json, sys
for line in sys.stdin:
    print(json.dumps({"type": "act", "stance": "maybe"}), flush=True)
"""

SILENT = """
import sys, time
for line in sys.stdin:
    time.sleep(10)
"""

NOT_JSON = """
import sys
for line in sys.stdin:
    print("hello", flush=True)
"""

def stdio(script, **kwargs):
    return StdioAdapter([sys.executable, "-c", script], **kwargs)

def observation(round=3):
    feed = [
        Post(author_id="u001", round=round - 1, stance=Stance.FAVOR),
        Post(author_id="ai-0000", round=round - 1, stance=Stance.AGAINST, is_ai=True, style=StyleTag.CONDEMNATION),
    ]
    return Observation(round=round, feed=feed)

def test_observation_message_shape():
    msg = observation_message(observation())
    assert msg == {
        "type": "observe",
        "round": 3,
        "feed": [
            {"stance": "favor", "is_ai": False, "style": "neutral"},
            {"stance": "against", "is_ai": True, "style": "condemnation"},
        ],
    }

def test_echo_adapter_posts_its_reply():
    with stdio(REPLY_AGAINST, agent_id="ext-0", deadline=10) as adapter:
        post = external_agent_step(observation(), adapter)
        later = external_agent_step(observation(4), adapter)
    assert post.stance is Stance.AGAINST
    assert post.is_ai and post.author_id == "ext-0" and post.round == 3
    assert post.text == "round 3"
    assert later.text == "round 4"

def test_human_role_posts_are_not_ai():
    with stdio(REPLY_AGAINST, role="human", deadline=10) as adapter:
        post = external_agent_step(observation(), adapter)
    assert not post.is_ai
    assert post.style is StyleTag.NEUTRAL

def test_unknown_stance_token_is_a_protocol_error():
    with stdio(REPLY_MAYBE, deadline=10) as adapter:
        with pytest.raises(AdapterProtocolError) as info:
            external_agent_step(observation(), adapter)
    assert info.value.round == 3
    assert "maybe" in str(info.value)

def test_silent_adapter_times_out():
    with stdio(SILENT, deadline=0.2) as adapter:
        with pytest.raises(AdapterTimeout) as info:
            external_agent_step(observation(5), adapter)
    assert info.value.round == 5

def test_invalid_json_is_a_protocol_error():
    with stdio(NOT_JSON, deadline=10) as adapter:
        with pytest.raises(AdapterProtocolError):
            external_agent_step(observation(), adapter)

def test_exited_adapter_is_a_protocol_error():
    with stdio("pass", deadline=10) as adapter:
        with pytest.raises(AdapterProtocolError):
            external_agent_step(observation(), adapter)

def test_parse_action_checks_type():
    assert parse_action({"type": "act", "stance": "ni"}, 1) == (Stance.NI, None)
    with pytest.raises(AdapterProtocolError):
        parse_action({"type": "observe", "stance": "ni"}, 1)
    with pytest.raises(AdapterProtocolError):
        parse_action({"type": "act", "stance": "ni", "text": 5}, 1)

def test_tcp_adapter_round_trip():
    server = socket.socket()
    server.bind(("127.0.0.1", 0))
    server.listen(1)
    port = server.getsockname()[1]

    def serve():
        conn, _ = server.accept()
        with conn, conn.makefile("r", encoding="utf-8") as lines:
            for line in lines:
                msg = json.loads(line)
                conn.sendall((json.dumps({"type": "act", "stance": "favor", "text": str(len(msg["feed"]))}) + "\n").encode())

    thread = threading.Thread(target=serve, daemon=True)
    thread.start()
    try:
        with connect_adapter(f"tcp://127.0.0.1:{port}", agent_id="ext-tcp", deadline=10) as adapter:
            post = external_agent_step(observation(), adapter)
    finally:
        server.close()
    assert isinstance(adapter, TcpAdapter)
    assert (post.stance, post.text, post.author_id) == (Stance.FAVOR, "2", "ext-tcp")

def test_address_parsing():
    assert isinstance(connect_adapter("stdio:python agent.py --fast"), StdioAdapter)
    assert connect_adapter("stdio:python agent.py --fast").command == ["python", "agent.py", "--fast"]
    tcp = connect_adapter("tcp://localhost:9000", role="human")
    assert (tcp.host, tcp.port, tcp.role) == ("localhost", 9000, "human")
    with pytest.raises(AdapterError):
        connect_adapter("tcp://localhost")
    with pytest.raises(AdapterError):
        connect_adapter("ftp://localhost:21")
    with pytest.raises(AdapterError):
        connect_adapter("stdio:agent", role="moderator")

def test_unconnected_tcp_adapter_fails_cleanly():
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    with pytest.raises(AdapterError):
        TcpAdapter("127.0.0.1", port, deadline=1).connect()
