import sys


def main():
    """Entry point for the laurentcf CLI command."""
    from laurentcf.cli import dispatch

    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
