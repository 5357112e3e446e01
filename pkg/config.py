import os
from dotenv import load_dotenv

load_dotenv()

# Storage Paths
BASE_STORAGE_PATH = os.getenv("BASE_STORAGE_PATH", "storage")  # Основной путь к storage
REPORTS_PATH = os.path.join(BASE_STORAGE_PATH, "reports")  # Путь для отчётов JSON/CSV
DB_PATH = os.getenv("DB_PATH", os.path.join(BASE_STORAGE_PATH, "database", "bandit_runs.db"))

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Универсальная константа C расписаний (C >= 100)
SCHEDULE_C = float(os.getenv("SCHEDULE_C", "100"))

# Журнал вытягиваний сессии; отключается для больших прогонов
AUDIT_LOG_ENABLED = os.getenv("AUDIT_LOG_ENABLED", "true").lower() in {"1", "true", "yes"}

DEFAULT_BASE_SEED = int(os.getenv("DEFAULT_BASE_SEED", "0"))
DEFAULT_PARALLELISM = int(os.getenv("DEFAULT_PARALLELISM", "1"))

# randomized | fixed-half | fixed-quarter
ALPHA_RULE = os.getenv("ALPHA_RULE", "randomized")

# ID-BAI: pseudocode | prose
ID_BAI_BATCH_VARIANT = os.getenv("ID_BAI_BATCH_VARIANT", "pseudocode")
ID_BAI_MAX_ROUNDS = int(os.getenv("ID_BAI_MAX_ROUNDS", "60"))

# Замороженная калибровочная константа для mean_pulls / instance_bound
ID_BAI_BOUND_RATIO_K = float(os.getenv("ID_BAI_BOUND_RATIO_K", "1600"))

# Ночной прогон приёмочных проверок
ACCEPT_CRON_HOUR = int(os.getenv("ACCEPT_CRON_HOUR", "3"))
ACCEPT_CRON_MINUTE = int(os.getenv("ACCEPT_CRON_MINUTE", "0"))
