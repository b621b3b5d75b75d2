"""Client-side tests for the embedding sidecar protocol, against an
in-process stub server speaking protocol version 1."""

import json
import socketserver
import threading

import numpy as np
import pytest

from bugtriage.errors import BackendUnavailableError, ProtocolError
from bugtriage.features import SidecarEmbedder


class _StubHandler(socketserver.StreamRequestHandler):
    dim = 8
    mangle = None  # optional reply rewriter

    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            if line == "PING":
                self.wfile.write(b"PONG\n")
                continue
            frame = json.loads(line)
            if frame["type"] == "hello":
                if frame.get("version") != 1:
                    self._send({"type": "error", "error": "unsupported version"})
                    return
                self._send({"type": "welcome", "version": 1, "dim": self.dim,
                            "model": "stub", "max_batch": 4})
            elif frame["type"] == "embed":
                items = []
                for item in frame["items"]:
                    text = item["text"]
                    vec = [0.0] * self.dim
                    for i, tok in enumerate(text.split()):
                        vec[(len(tok) + i) % self.dim] += 1.0
                    items.append({"id": item["id"], "vector": vec, "dim": self.dim})
                reply = {"type": "vectors", "items": items}
                if self.mangle:
                    reply = self.mangle(reply)
                self._send(reply)

    def _send(self, frame):
        self.wfile.write((json.dumps(frame) + "\n").encode("utf-8"))


@pytest.fixture
def stub_sidecar():
    server = socketserver.ThreadingTCPServer(("127.0.0.1", 0), _StubHandler)
    server.daemon_threads = True
    threading.Thread(target=server.serve_forever, daemon=True).start()
    _StubHandler.mangle = None
    _StubHandler.dim = 8
    yield f"127.0.0.1:{server.server_address[1]}"
    server.shutdown()


class TestSidecarClient:
    def test_handshake_announces_dim(self, stub_sidecar):
        client = SidecarEmbedder(stub_sidecar)
        assert client.dim == 8
        assert client.model == "stub"

    def test_embed_batch_ordered_by_id(self, stub_sidecar):
        client = SidecarEmbedder(stub_sidecar)
        out = client.embed_batch([["crash"], ["sort", "name"], []])
        assert out.shape == (3, 8)
        assert np.count_nonzero(out[2]) == 0

    def test_chunks_batches_to_announced_max(self, stub_sidecar):
        client = SidecarEmbedder(stub_sidecar)
        out = client.embed_batch([["tok"]] * 11)  # max_batch=4 -> 3 chunks
        assert out.shape == (11, 8)
        assert np.array_equal(out[0], out[10])

    def test_unreachable_names_endpoint(self):
        with pytest.raises(BackendUnavailableError) as err:
            SidecarEmbedder("127.0.0.1:1")
        assert err.value.endpoint == "127.0.0.1:1"

    def test_dim_mismatch_is_protocol_error(self, stub_sidecar):
        def mangle(reply):
            for item in reply["items"]:
                item["vector"] = item["vector"][:-1]
            return reply

        _StubHandler.mangle = staticmethod(mangle)
        client = SidecarEmbedder(stub_sidecar)
        with pytest.raises(ProtocolError, match="dim"):
            client.embed_batch([["tok"]])

    def test_missing_id_is_protocol_error(self, stub_sidecar):
        def mangle(reply):
            reply["items"] = reply["items"][1:]
            return reply

        _StubHandler.mangle = staticmethod(mangle)
        client = SidecarEmbedder(stub_sidecar)
        with pytest.raises(ProtocolError, match="missing id"):
            client.embed_batch([["a"], ["b"]])

    def test_error_frame_raises(self, stub_sidecar):
        class BadVersion(SidecarEmbedder):
            PROTOCOL_VERSION = 99

        with pytest.raises(ProtocolError, match="unsupported version"):
            BadVersion(stub_sidecar)

    def test_bad_address_rejected(self):
        with pytest.raises(ValueError):
            SidecarEmbedder("no-port")
