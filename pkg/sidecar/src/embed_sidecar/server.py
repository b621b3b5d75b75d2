"""TCP server speaking the embedding protocol, version 1.

Frames are newline-delimited JSON. A connection starts with a handshake:
client ``{"type": "hello", "version": 1}``, server ``{"type": "welcome",
"version": 1, "dim": D, "model": id, "max_batch": N}``; an unsupported
version gets an error frame and the connection is closed. After the
handshake, each ``{"type": "embed", "items": [{"id", "text"}...]}`` frame is
answered with ``{"type": "vectors", "items": [{"id", "vector", "dim"}...]}``
keyed by the request ids. A batch larger than max_batch is answered with a
``partial_reject`` frame listing the rejected ids, followed by vectors for
the accepted prefix. A literal ``PING`` line answers ``PONG`` at any time.
One batch is in flight per connection; each connection is served by its own
thread, so responses never interleave within a connection.
"""

from __future__ import annotations

import json
import socketserver

PROTOCOL_VERSION = 1


class _ConnectionClosed(Exception):
    pass


class _Handler(socketserver.StreamRequestHandler):
    def _send(self, frame: dict) -> None:
        self.wfile.write((json.dumps(frame) + "\n").encode("utf-8"))

    def _fail(self, message: str) -> None:
        self._send({"type": "error", "error": message})
        raise _ConnectionClosed

    def handle(self):
        model = self.server.model
        handshaken = False
        try:
            for raw in self.rfile:
                line = raw.decode("utf-8", errors="replace").strip()
                if not line:
                    continue
                if line == "PING":
                    self.wfile.write(b"PONG\n")
                    continue
                try:
                    frame = json.loads(line)
                except json.JSONDecodeError:
                    self._fail("malformed frame: not valid JSON")
                if not isinstance(frame, dict) or "type" not in frame:
                    self._fail("malformed frame: missing type")
                kind = frame["type"]
                if kind == "hello":
                    if frame.get("version") != PROTOCOL_VERSION:
                        self._fail(f"unsupported version {frame.get('version')!r}")
                    handshaken = True
                    self._send({
                        "type": "welcome",
                        "version": PROTOCOL_VERSION,
                        "dim": model.dim,
                        "model": model.model_id,
                        "max_batch": self.server.max_batch,
                    })
                elif kind == "embed":
                    if not handshaken:
                        self._fail("embed before handshake")
                    self._embed(frame)
                else:
                    self._fail(f"unknown frame type {kind!r}")
        except _ConnectionClosed:
            pass

    def _embed(self, frame: dict) -> None:
        items = frame.get("items")
        if not isinstance(items, list):
            self._fail("embed frame has no items list")
        ids = []
        texts = []
        for item in items:
            if not isinstance(item, dict) or "id" not in item or "text" not in item:
                self._fail("embed item needs id and text")
            ids.append(str(item["id"]))
            texts.append(str(item["text"]))
        if len(set(ids)) != len(ids):
            self._fail("duplicate ids in batch")
        max_batch = self.server.max_batch
        if len(ids) > max_batch:
            self._send({"type": "partial_reject", "rejected": ids[max_batch:]})
            ids, texts = ids[:max_batch], texts[:max_batch]
        vectors = self.server.model.encode(texts)
        self._send({
            "type": "vectors",
            "items": [
                {"id": rid, "vector": vec.tolist(), "dim": len(vec)}
                for rid, vec in zip(ids, vectors)
            ],
        })


class SidecarServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], model, max_batch: int = 256):
        if max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        self.model = model
        self.max_batch = max_batch
        super().__init__(address, _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]
