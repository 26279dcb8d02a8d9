import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

SEED = int(os.getenv("TATE_SEED", "0"))
WINDOW = int(os.getenv("TATE_WINDOW", "8"))
PHI_CAP = int(os.getenv("TATE_PHI_CAP", "6"))
MAX_WORKERS = int(os.getenv("TATE_MAX_WORKERS", "4"))
LOG_LEVEL = os.getenv("TATE_LOG_LEVEL", "INFO").upper()
TRIPLE_DEGREE = int(os.getenv("TATE_TRIPLE_DEGREE", "2"))
