"""Paging HTTP client for the external module catalog."""

from __future__ import annotations

from typing import Iterator

import requests

from ..errors import ConnectionFailure, RemoteError

SEARCH_PATH = "/api/search/modules"


class CatalogClient:
    def __init__(self, base_url: str, page_size: int = 500, timeout: float = 10.0):
        self._base_url = base_url.rstrip("/")
        self._page_size = page_size
        self._timeout = timeout

    def iter_pages(self) -> Iterator[list[dict]]:
        offset = 0
        while True:
            try:
                response = requests.get(
                    self._base_url + SEARCH_PATH,
                    params={"limit": self._page_size, "offset": offset},
                    timeout=self._timeout,
                )
            except requests.RequestException as exc:
                raise ConnectionFailure(f"catalog unreachable: {exc}") from None
            if response.status_code != 200:
                raise RemoteError(f"catalog returned HTTP {response.status_code}")
            try:
                body = response.json()
                page = body["modules"]
                if not isinstance(page, list):
                    raise TypeError("modules is not a list")
            except (ValueError, KeyError, TypeError) as exc:
                raise RemoteError(f"malformed catalog page at offset {offset}: {exc}") from None
            if not page:
                return
            yield page
            if len(page) < self._page_size:
                return
            offset += len(page)
