from core.cli.app import app

if __name__ == "__main__":
    app(prog_name="p300-toolkit")
