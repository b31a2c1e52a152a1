"""Client for E-utilities-compatible bibliographic APIs.

Two-step protocol: ``esearch.fcgi`` turns a query into record ids,
``efetch.fcgi`` returns record XML in batches.  The client enforces a
client-side rate limit (sliding one-second window), retries transient
failures with exponential backoff, and parses the PubmedArticle XML subset
(PMID, ArticleTitle, AbstractText, KeywordList, AuthorList, PubDate/Year,
AffiliationInfo) into :class:`~collabnet.ingest.PublicationRecord` values.

The base URL, clock and sleep function are all injectable so the whole
client is testable against a local replay server without real sleeping.
"""

from __future__ import annotations

import logging
import re
import time
import urllib.error
import urllib.parse
import urllib.request
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass, field

from .errors import HttpError, NetworkTimeout, ParseError, RateLimited
from .ingest import PublicationRecord

log = logging.getLogger(__name__)

API_KEY_ENV = "SYNERGY_API_KEY"
_YEAR_RE = re.compile(r"\b(1[89]\d{2}|20\d{2})\b")


@dataclass
class RemoteConfig:
    base_url: str
    api_key: str | None = None
    rate_per_second: int = 3
    max_attempts: int = 3
    timeout_s: float = 30.0
    batch_size: int = 200
    backoff_base_s: float = 1.0
    clock: object = time.monotonic
    sleep: object = time.sleep


class RateLimiter:
    """Allow at most ``rate`` acquisitions in any sliding one-second window."""

    def __init__(self, rate: int, clock=time.monotonic, sleep=time.sleep):
        self.rate = max(1, int(rate))
        self.clock = clock
        self.sleep = sleep
        self._recent: deque[float] = deque()

    def acquire(self) -> None:
        now = self.clock()
        while self._recent and now - self._recent[0] >= 1.0:
            self._recent.popleft()
        if len(self._recent) >= self.rate:
            wait = 1.0 - (now - self._recent[0])
            if wait > 0:
                self.sleep(wait)
                now = self.clock()
            # The sleep was sized to outlive the oldest entry, but summing
            # float timestamps can leave ``now - oldest`` a hair under 1.0;
            # drop it unconditionally so the window never overfills.
            self._recent.popleft()
            while self._recent and now - self._recent[0] >= 1.0:
                self._recent.popleft()
        self._recent.append(now)


class Client:
    def __init__(self, config: RemoteConfig):
        self.config = config
        self.limiter = RateLimiter(config.rate_per_second, config.clock, config.sleep)

    def _url(self, endpoint: str, params: dict) -> str:
        params = dict(params)
        if self.config.api_key:
            params["api_key"] = self.config.api_key
        base = self.config.base_url.rstrip("/")
        return f"{base}/{endpoint}?{urllib.parse.urlencode(params)}"

    def _get(self, url: str) -> bytes:
        """One HTTP GET with rate limiting, retries and backoff."""
        last_status: int | None = None
        timed_out = False
        for attempt in range(self.config.max_attempts):
            if attempt:
                self.config.sleep(self.config.backoff_base_s * 2 ** (attempt - 1))
            self.limiter.acquire()
            try:
                req = urllib.request.Request(url, headers={"User-Agent": "collabnet/0.1"})
                with urllib.request.urlopen(req, timeout=self.config.timeout_s) as resp:
                    return resp.read()
            except urllib.error.HTTPError as exc:
                last_status = exc.code
                if exc.code != 429 and exc.code < 500:
                    raise HttpError(exc.code, url) from exc
                log.warning("attempt %d: HTTP %d from %s", attempt + 1, exc.code, url)
            except TimeoutError as exc:
                timed_out = True
                log.warning("attempt %d: timeout from %s (%s)", attempt + 1, url, exc)
            except urllib.error.URLError as exc:
                if isinstance(exc.reason, TimeoutError):
                    timed_out = True
                else:
                    last_status = None
                log.warning("attempt %d: %s from %s", attempt + 1, exc.reason, url)
        if last_status == 429:
            raise RateLimited(f"{url}: still rate-limited after {self.config.max_attempts} attempts")
        if last_status is not None:
            raise HttpError(last_status, f"{url} after {self.config.max_attempts} attempts")
        if timed_out:
            raise NetworkTimeout(f"{url}: no answer in {self.config.timeout_s}s")
        raise NetworkTimeout(f"{url}: connection failed after {self.config.max_attempts} attempts")

    def search_ids(self, query: str, max_records: int) -> list[str]:
        body = self._get(
            self._url(
                "esearch.fcgi",
                {"db": "pubmed", "term": query, "retmax": max_records, "retmode": "xml"},
            )
        )
        try:
            root = ET.fromstring(body)
        except ET.ParseError as exc:
            raise ParseError(f"esearch returned invalid XML: {exc}") from exc
        return [el.text.strip() for el in root.iter("Id") if el.text and el.text.strip()]

    def fetch_records(self, ids: list[str]) -> list[PublicationRecord]:
        records: list[PublicationRecord] = []
        for start in range(0, len(ids), self.config.batch_size):
            batch = ids[start : start + self.config.batch_size]
            body = self._get(
                self._url(
                    "efetch.fcgi",
                    {"db": "pubmed", "id": ",".join(batch), "retmode": "xml"},
                )
            )
            records.extend(parse_pubmed_xml(body))
        return records


def _text(el) -> str:
    return " ".join("".join(el.itertext()).split()) if el is not None else ""


def _parse_article(article) -> PublicationRecord:
    pmid = _text(article.find(".//PMID"))
    if not pmid:
        raise ParseError("article without PMID")
    title = _text(article.find(".//ArticleTitle"))
    abstract = " ".join(
        filter(None, (_text(el) for el in article.findall(".//Abstract/AbstractText")))
    )
    keywords = [
        _text(el) for el in article.findall(".//KeywordList/Keyword") if _text(el)
    ]

    year = None
    for el in article.findall(".//PubDate/Year"):
        if el.text and el.text.strip().isdigit():
            year = int(el.text.strip())
            break
    if year is None:
        match = _YEAR_RE.search(_text(article.find(".//PubDate/MedlineDate")))
        if match:
            year = int(match.group(1))

    authors = []
    for author in article.findall(".//AuthorList/Author"):
        fore = _text(author.find("ForeName"))
        last = _text(author.find("LastName"))
        name = f"{fore} {last}".strip() or _text(author.find("CollectiveName"))
        if not name:
            continue
        affiliation = _text(author.find(".//AffiliationInfo/Affiliation")) or None
        authors.append((name, affiliation))

    return PublicationRecord(
        pub_id=f"PMID:{pmid}",
        title=title,
        abstract=abstract,
        keywords=keywords,
        year=year,
        authors=authors,
    )


def parse_pubmed_xml(body: bytes) -> list[PublicationRecord]:
    """Parse efetch XML; malformed articles are skipped and counted."""
    try:
        root = ET.fromstring(body)
    except ET.ParseError as exc:
        raise ParseError(f"efetch returned invalid XML: {exc}") from exc
    records = []
    skipped = 0
    for article in root.iter("PubmedArticle"):
        try:
            records.append(_parse_article(article))
        except ParseError as exc:
            skipped += 1
            log.warning("skipping malformed article: %s", exc)
    if skipped:
        log.warning("skipped %d malformed article(s)", skipped)
    return records


def fetch_remote(query: str, max_records: int, config: RemoteConfig) -> list[PublicationRecord]:
    """Search then fetch up to ``max_records`` records; [] without a request when 0."""
    if max_records <= 0:
        return []
    client = Client(config)
    ids = client.search_ids(query, max_records)
    return client.fetch_records(ids[:max_records])
