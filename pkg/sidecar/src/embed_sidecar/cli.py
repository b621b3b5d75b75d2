"""Run the embedding sidecar: ``embed-sidecar --listen 127.0.0.1:7077``."""

from __future__ import annotations

import argparse
import sys

from .model import load_model
from .server import SidecarServer


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="embed-sidecar", description=__doc__)
    parser.add_argument("--listen", default="127.0.0.1:7077", metavar="HOST:PORT")
    parser.add_argument("--model", default="fixture-tiny",
                        help="fixture-tiny (default) or hf:<pretrained model name>")
    parser.add_argument("--max-batch", type=int, default=256)
    args = parser.parse_args(argv)

    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        parser.error(f"--listen must be host:port, got {args.listen!r}")
    try:
        model = load_model(args.model)
    except ValueError as exc:
        parser.error(str(exc))

    server = SidecarServer((host, int(port)), model, max_batch=args.max_batch)
    print(f"embed-sidecar serving {model.model_id} (dim {model.dim}) on {host}:{server.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
