"""HttpChatTransport against a loopback HTTP server; no external network."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from multiref.errors import TransportError
from multiref.refgen import GenerationConfig, HttpChatTransport


class ScriptedHandler(BaseHTTPRequestHandler):
    script = []
    requests = []

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        type(self).requests.append((self.path, dict(self.headers), body))
        status, payload, headers = type(self).script.pop(0)
        self.send_response(status)
        for key, value in headers.items():
            self.send_header(key, value)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(json.dumps(payload).encode("utf-8"))

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    httpd = HTTPServer(("127.0.0.1", 0), ScriptedHandler)
    ScriptedHandler.script = []
    ScriptedHandler.requests = []
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield httpd
    httpd.shutdown()
    thread.join()


def config_for(server, **kwargs):
    port = server.server_address[1]
    return GenerationConfig(
        model_name="test-model",
        n_references=2,
        endpoint_url=f"http://127.0.0.1:{port}/v1/chat/completions",
        timeout=5.0,
        **kwargs,
    )


def chat_payload(content):
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


def test_success_path_and_wire_format(server):
    ScriptedHandler.script = [(200, chat_payload("1. a\n2. b"), {})]
    transport = HttpChatTransport(api_key="sk-test")
    reply = transport.complete("some prompt", config_for(server))
    assert reply == "1. a\n2. b"

    path, headers, body = ScriptedHandler.requests[0]
    assert path == "/v1/chat/completions"
    assert headers["Authorization"] == "Bearer sk-test"
    assert body == {
        "model": "test-model",
        "messages": [{"role": "user", "content": "some prompt"}],
    }


def test_rate_limit_retried_with_retry_after(server):
    ScriptedHandler.script = [
        (429, {"error": "slow down"}, {"Retry-After": "0"}),
        (200, chat_payload("ok"), {}),
    ]
    transport = HttpChatTransport(api_key="sk-test")
    assert transport.complete("p", config_for(server)) == "ok"
    assert len(ScriptedHandler.requests) == 2


def test_auth_failure_aborts_immediately(server):
    ScriptedHandler.script = [(401, {"error": "bad key"}, {})]
    transport = HttpChatTransport(api_key="sk-wrong")
    with pytest.raises(TransportError, match="401"):
        transport.complete("p", config_for(server))
    assert len(ScriptedHandler.requests) == 1


def test_unexpected_payload_is_transport_error(server):
    ScriptedHandler.script = [(200, {"unexpected": True}, {})]
    transport = HttpChatTransport(api_key="sk-test")
    with pytest.raises(TransportError, match="payload"):
        transport.complete("p", config_for(server))


def test_unreachable_endpoint_is_transport_error():
    transport = HttpChatTransport(api_key="sk-test")
    cfg = GenerationConfig(
        endpoint_url="http://127.0.0.1:1/v1/chat/completions", timeout=1.0
    )
    with pytest.raises(TransportError, match="reach"):
        transport.complete("p", cfg)


def test_missing_api_key_rejected(monkeypatch):
    monkeypatch.delenv("MULTIREF_API_KEY", raising=False)
    monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    with pytest.raises(TransportError, match="API key"):
        HttpChatTransport()


def test_key_resolved_from_environment(monkeypatch, server):
    monkeypatch.setenv("MULTIREF_API_KEY", "sk-env")
    ScriptedHandler.script = [(200, chat_payload("x"), {})]
    transport = HttpChatTransport()
    transport.complete("p", config_for(server))
    assert ScriptedHandler.requests[0][1]["Authorization"] == "Bearer sk-env"
