from config import Config
from src import create_app

application = app = create_app()

if __name__ == '__main__':
    application.run(host=Config.API_HOST, port=Config.API_PORT, debug=Config.DEBUG)
