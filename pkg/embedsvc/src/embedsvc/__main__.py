"""Entry point: ``python -m embedsvc`` or the ``embedsvc`` console script."""

import uvicorn

from .app import create_app
from .config import from_env


def main() -> None:
    config = from_env()
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)


if __name__ == "__main__":
    main()
