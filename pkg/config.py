import os

from dotenv import load_dotenv

basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, ".env"))


class Config:
    # Payload width t in bits; every message carries t random bits.
    CIA_PAYLOAD_BITS = int(os.environ.get("CIA_PAYLOAD_BITS", "8"))
    CIA_JOBS = int(os.environ.get("CIA_JOBS", "1"))
    # Exhaustive search refuses larger rings (7^6 channels is already a long run).
    CIA_SEARCH_MAX_N = int(os.environ.get("CIA_SEARCH_MAX_N", "7"))
    CIA_SAMPLE_ATTEMPTS = int(os.environ.get("CIA_SAMPLE_ATTEMPTS", "200000"))
    CIA_LOG_LEVEL = os.environ.get("CIA_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
    CIA_DEFAULT_SCHEME = os.environ.get("CIA_DEFAULT_SCHEME", "none").strip().lower() or "none"
    SAMPLES_DIR = os.path.join(basedir, "samples")
