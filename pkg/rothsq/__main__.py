import sys
import traceback

try:
    from rothsq.main import main
except Exception:
    # Fallback entry point to show startup errors
    error_msg = f"Startup Error:\n{traceback.format_exc()}"

    def main(argv=None) -> int:
        print(f"❌ {error_msg}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
